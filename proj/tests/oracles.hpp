#pragma once

// Test-only oracles. None of these call into the library code they check.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace oracle {

inline bool is_ws(char32_t c) {
    return c == U' ' || c == U'\t' || c == U'\r' || c == U'\n' || c == U'\f' || c == U'\v';
}

inline std::u32string strip(const std::u32string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && is_ws(s[b])) ++b;
    while (e > b && is_ws(s[e - 1])) --e;
    return s.substr(b, e - b);
}

inline long count(const std::u32string& s, char32_t c) {
    long n = 0;
    for (char32_t x : s) n += x == c;
    return n;
}

/// Brace balancing, line for line: count, then repeatedly find()/rfind() and
/// splice out one brace per iteration, then strip.
inline std::u32string balance_curly_braces(std::u32string text) {
    long opening_count = count(text, U'{');
    long closing_count = count(text, U'}');
    if (opening_count > closing_count) {
        while (opening_count > closing_count) {
            const auto index = text.find(U'{');
            if (index != std::u32string::npos) {
                text = text.substr(0, index) + text.substr(index + 1);
                opening_count -= 1;
            }
        }
    } else if (closing_count > opening_count) {
        while (closing_count > opening_count) {
            const auto index = text.rfind(U'}');
            if (index != std::u32string::npos) {
                text = text.substr(0, index) + text.substr(index + 1);
                closing_count -= 1;
            }
        }
    }
    return strip(text);
}

/// Brace-span removal with an explicit character stack. `initial` is the
/// starting value of the output buffer (the written algorithm uses a single
/// space; the library starts empty).
inline std::u32string remove_brace_spans(const std::u32string& text, const std::u32string& initial = U"") {
    std::vector<char32_t> stack;
    std::u32string clean_text = initial;
    for (char32_t ch : text) {
        if (ch == U'{') {
            stack.push_back(ch);
        } else if (ch == U'}') {
            if (!stack.empty() && stack.back() == U'{') stack.pop_back();
        } else {
            if (stack.empty()) clean_text += ch;
        }
    }
    return clean_text;
}

/// Per-class precision/recall/F1 straight from label vectors.
inline double macro_f1(const std::vector<int>& gold, const std::vector<int>& pred) {
    double sum = 0.0;
    for (int cls = 0; cls <= 1; ++cls) {
        long tp = 0, predicted = 0, actual = 0;
        for (std::size_t i = 0; i < gold.size(); ++i) {
            if (pred[i] == cls) ++predicted;
            if (gold[i] == cls) ++actual;
            if (pred[i] == cls && gold[i] == cls) ++tp;
        }
        const double p = predicted == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(predicted);
        const double r = actual == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(actual);
        sum += (p + r) == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
    }
    return sum / 2.0;
}

/// Mean binary cross-entropy of a dense logistic model, naive formula.
inline double dense_logistic_loss(const std::vector<double>& w, const std::vector<std::vector<double>>& xs,
                                  const std::vector<double>& ys) {
    double total = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double z = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j) z += w[j] * xs[i][j];
        const double p = 1.0 / (1.0 + std::exp(-z));
        total += -(ys[i] * std::log(p) + (1.0 - ys[i]) * std::log(1.0 - p));
    }
    return total / static_cast<double>(xs.size());
}

/// Central finite differences of dense_logistic_loss.
inline std::vector<double> finite_difference_gradient(std::vector<double> w, const std::vector<std::vector<double>>& xs,
                                                      const std::vector<double>& ys, double h = 1e-5) {
    std::vector<double> g(w.size());
    for (std::size_t j = 0; j < w.size(); ++j) {
        const double keep = w[j];
        w[j] = keep + h;
        const double up = dense_logistic_loss(w, xs, ys);
        w[j] = keep - h;
        const double down = dense_logistic_loss(w, xs, ys);
        w[j] = keep;
        g[j] = (up - down) / (2.0 * h);
    }
    return g;
}

/// One scalar AdamW step written out term by term from the textbook form:
/// bias-corrected moments, epsilon-hat in the denominator, then decoupled decay.
struct ScalarAdamW {
    double lr, beta1, beta2, eps, weight_decay;
    double w = 0.0, m = 0.0, v = 0.0;
    long t = 0;

    void step(double g, bool decay = true) {
        t += 1;
        m = beta1 * m + (1.0 - beta1) * g;
        v = beta2 * v + (1.0 - beta2) * g * g;
        const double bias_correction1 = 1.0 - std::pow(beta1, static_cast<double>(t));
        const double bias_correction2 = 1.0 - std::pow(beta2, static_cast<double>(t));
        const double step_size = lr * std::sqrt(bias_correction2) / bias_correction1;
        w = w - step_size * m / (std::sqrt(v) + eps);
        if (decay) w = w - lr * weight_decay * w;
    }
};

}  // namespace oracle
