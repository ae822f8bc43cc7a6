#pragma once

#include <functional>

namespace dwdirac {

// Brent's method on a bracketing interval: fa = f(a) and fb = f(b) must have
// opposite signs (or one of them is exactly zero). Returns the abscissa of the
// root to within xtol.
double brent_root(const std::function<double(double)>& f, double a, double b, double fa,
                  double fb, double xtol);

} // namespace dwdirac
