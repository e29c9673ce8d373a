#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace nilorbit {

inline double halton(uint64_t index, int base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * (double)(index % base);
        index /= base;
    }
    return r;
}

// Point i of the Halton sequence in [0,1)^dims.
inline std::vector<double> halton_point(uint64_t i, int dims) {
    static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19};
    std::vector<double> p(dims);
    for (int d = 0; d < dims; ++d) p[d] = halton(i + 1, primes[d]);
    return p;
}

// Deterministic, nearly uniform directions on S^2.
inline std::vector<std::vector<double>> fibonacci_sphere(int count) {
    std::vector<std::vector<double>> dirs;
    dirs.reserve(count);
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
        double y = 1.0 - 2.0 * (i + 0.5) / count;
        double r = std::sqrt(std::max(0.0, 1.0 - y * y));
        double th = golden * i;
        dirs.push_back({r * std::cos(th), y, r * std::sin(th)});
    }
    return dirs;
}

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 1.0;
    int points = 0;
};

inline LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    LineFit f;
    f.points = (int)xs.size();
    if (xs.size() < 2) return f;
    double n = (double)xs.size(), sx = 0, sy = 0;
    for (size_t i = 0; i < xs.size(); ++i) sx += xs[i], sy += ys[i];
    double mx = sx / n, my = sy / n, sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    f.slope = sxx > 0 ? sxy / sxx : 0.0;
    f.intercept = my - f.slope * mx;
    double ssres = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        double r = ys[i] - (f.intercept + f.slope * xs[i]);
        ssres += r * r;
    }
    f.r2 = syy > 0 ? 1.0 - ssres / syy : 1.0;
    return f;
}

// Deterministic parallel map over [0, count): results land at their index.
inline void parallel_for(int count, const std::function<void(int)>& body) {
    unsigned hw = std::thread::hardware_concurrency();
    int workers = (int)std::min<unsigned>(hw ? hw : 1, 8);
    if (workers <= 1 || count < 4) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) body(i);
        });
    for (auto& t : pool) t.join();
}

}  // namespace nilorbit
