#pragma once

// Sparse multivariate polynomials with total-degree truncation, generic over
// the coefficient ring. Exponents are packed one byte per variable into a
// uint64 key, which caps the engine at 8 variables and degree 255 per
// variable; plenty for exponential-coordinate charts of desk-scale algebras.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace nilorbit {

constexpr int kPolyMaxVars = 8;

inline int mono_total_degree(uint64_t key) {
    int d = 0;
    while (key) {
        d += (int)(key & 0xff);
        key >>= 8;
    }
    return d;
}

inline uint64_t mono_mul(uint64_t a, uint64_t b) { return a + b; }

inline int mono_exp(uint64_t key, int var) { return (int)((key >> (8 * var)) & 0xff); }

inline uint64_t mono_var(int var, int power = 1) { return (uint64_t)power << (8 * var); }

template <class T>
class Poly {
  public:
    Poly() : nvars_(0), max_deg_(64) {}
    Poly(int nvars, int max_deg) : nvars_(nvars), max_deg_(max_deg) {
        if (nvars > kPolyMaxVars) throw std::invalid_argument("Poly: too many variables");
    }

    static Poly constant(int nvars, int max_deg, const T& c) {
        Poly p(nvars, max_deg);
        if (!(c == T(0))) p.terms_[0] = c;
        return p;
    }
    static Poly variable(int nvars, int max_deg, int var) {
        Poly p(nvars, max_deg);
        if (max_deg >= 1) p.terms_[mono_var(var)] = T(1);
        return p;
    }

    int nvars() const { return nvars_; }
    int max_deg() const { return max_deg_; }
    const std::map<uint64_t, T>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    int degree() const {
        int d = 0;
        for (auto& [k, c] : terms_) d = std::max(d, mono_total_degree(k));
        return d;
    }

    T coeff(uint64_t key) const {
        auto it = terms_.find(key);
        return it == terms_.end() ? T(0) : it->second;
    }

    void add_term(uint64_t key, const T& c) {
        if (mono_total_degree(key) > max_deg_) return;
        auto it = terms_.find(key);
        if (it == terms_.end()) {
            if (!(c == T(0))) terms_[key] = c;
        } else {
            it->second += c;
            if (it->second == T(0)) terms_.erase(it);
        }
    }

    Poly& operator+=(const Poly& o) {
        for (auto& [k, c] : o.terms_) add_term(k, c);
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        for (auto& [k, c] : o.terms_) add_term(k, T(0) - c);
        return *this;
    }
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }

    friend Poly operator*(const Poly& a, const Poly& b) {
        Poly out(a.nvars_, a.max_deg_);
        for (auto& [ka, ca] : a.terms_) {
            int da = mono_total_degree(ka);
            for (auto& [kb, cb] : b.terms_) {
                if (da + mono_total_degree(kb) > a.max_deg_) continue;
                out.add_term(mono_mul(ka, kb), ca * cb);
            }
        }
        return out;
    }

    Poly scaled(const T& c) const {
        Poly out(nvars_, max_deg_);
        if (c == T(0)) return out;
        for (auto& [k, v] : terms_) out.terms_[k] = c * v;
        return out;
    }

    Poly derivative(int var) const {
        Poly out(nvars_, max_deg_);
        for (auto& [k, c] : terms_) {
            int e = mono_exp(k, var);
            if (e == 0) continue;
            out.add_term(k - mono_var(var), c * T(e));
        }
        return out;
    }

    template <class S>
    S eval(const std::vector<S>& x, S (*conv)(const T&)) const {
        S acc(0);
        for (auto& [k, c] : terms_) {
            S term = conv(c);
            for (int v = 0; v < nvars_; ++v)
                for (int e = 0; e < mono_exp(k, v); ++e) term = term * x[v];
            acc += term;
        }
        return acc;
    }

    // Plain same-type evaluation.
    T operator()(const std::vector<T>& x) const {
        T acc(0);
        for (auto& [k, c] : terms_) {
            T term = c;
            for (int v = 0; v < nvars_; ++v)
                for (int e = 0; e < mono_exp(k, v); ++e) term = term * x[v];
            acc += term;
        }
        return acc;
    }

  private:
    int nvars_;
    int max_deg_;
    std::map<uint64_t, T> terms_;
};

}  // namespace nilorbit
