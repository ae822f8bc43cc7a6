#pragma once

namespace dwdirac {

// Uniform grid on [-L, L] with N nodes (N odd keeps x = 0 on the grid, which the
// finite-difference operators rely on for symmetric truncation).
struct Grid {
    double L = 0.0;
    int N = 0;

    double h() const { return 2.0 * L / (N - 1); }
    double x(int i) const { return -L + i * h(); }
    Grid refined() const { return {L, 2 * N - 1}; } // halves h, keeps the endpoints
};

} // namespace dwdirac
