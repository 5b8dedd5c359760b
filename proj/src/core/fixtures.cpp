#include "core/fixtures.hpp"

namespace butson {

namespace {

constexpr int kW19[19][19] = {
    {3, 0, 1, 1, 0, 0, 5, 4, 3, 5, 3, 2, 1, 1, 3, 5, 4, 3, 0},
    {0, 0, 1, 3, 3, 1, 4, 2, 4, 5, 1, 5, 1, 4, 3, 3, 1, 5, 0},
    {0, 0, 1, 4, 2, 4, 2, 4, 3, 2, 4, 1, 3, 3, 1, 4, 5, 1, 0},
    {1, 2, 4, 2, 1, 2, 4, 4, 2, 4, 5, 0, 3, 5, 1, 1, 3, 4, 0},
    {2, 5, 4, 3, 2, 0, 4, 2, 0, 1, 4, 2, 4, 1, 5, 3, 1, 3, 0},
    {0, 3, 5, 4, 5, 0, 4, 5, 3, 1, 3, 4, 5, 3, 4, 1, 3, 1, 0},
    {5, 4, 3, 5, 3, 2, 3, 0, 1, 1, 0, 0, 1, 1, 3, 5, 4, 3, 0},
    {4, 2, 4, 5, 1, 5, 0, 0, 1, 3, 3, 1, 1, 4, 3, 3, 1, 5, 0},
    {2, 4, 3, 2, 4, 1, 0, 0, 1, 4, 2, 4, 3, 3, 1, 4, 5, 1, 0},
    {4, 4, 2, 4, 5, 0, 1, 2, 4, 2, 1, 2, 3, 5, 1, 1, 3, 4, 0},
    {4, 2, 0, 1, 4, 2, 2, 5, 4, 3, 2, 0, 4, 1, 5, 3, 1, 3, 0},
    {4, 5, 3, 1, 3, 4, 0, 3, 5, 4, 5, 0, 5, 3, 4, 1, 3, 1, 0},
    {5, 5, 3, 3, 2, 1, 5, 5, 3, 3, 2, 1, 0, 0, 0, 0, 1, 1, 3},
    {5, 2, 3, 1, 5, 3, 5, 2, 3, 1, 5, 3, 0, 0, 1, 3, 0, 1, 0},
    {3, 3, 5, 5, 1, 2, 3, 3, 5, 5, 1, 2, 1, 3, 0, 0, 0, 1, 0},
    {1, 3, 2, 5, 3, 5, 1, 3, 2, 5, 3, 5, 0, 1, 0, 1, 0, 4, 1},
    {2, 5, 1, 3, 5, 3, 2, 5, 1, 3, 5, 3, 1, 0, 4, 1, 1, 0, 0},
    {3, 1, 5, 2, 3, 5, 3, 1, 5, 2, 3, 5, 1, 0, 1, 0, 4, 0, 1},
    {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 4, 1, 1, 0, 1, 0, 0},
};

ExponentMatrix build_w19() {
    ExponentMatrix m(6, 19, 19);
    for (unsigned i = 0; i < 19; ++i)
        for (unsigned j = 0; j < 19; ++j)
            m.set(i, j, kW19[i][j]);
    return m;
}

}  // namespace

const ExponentMatrix& w19() {
    static const ExponentMatrix m = build_w19();
    return m;
}

ExponentMatrix fourier(unsigned n) {
    if (n == 0) throw std::invalid_argument("fourier: n must be >= 1");
    ExponentMatrix m(n, n, n);
    for (unsigned i = 0; i < n; ++i)
        for (unsigned k = 0; k < n; ++k)
            m.set(i, k, static_cast<int>((static_cast<unsigned long long>(i) * k) % n));
    return m;
}

std::uint64_t matrix_checksum(const ExponentMatrix& m) {
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    auto mix = [&h](std::uint64_t v) {
        for (int b = 0; b < 8; ++b) {
            h ^= (v >> (8 * b)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    mix(m.q());
    mix(m.n_rows());
    mix(m.n_cols());
    for (int e : m.entries()) mix(static_cast<std::uint64_t>(e));
    return h;
}

}  // namespace butson
