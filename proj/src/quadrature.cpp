#include "quadlin/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "quadlin/errors.hpp"

namespace quadlin {

namespace {

struct Segment {
    double a, b;
    double fa, fm, fb;
    double whole;
    double eps;
};

double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        const QuadratureTolerance& tol) {
    if (a == b) return 0.0;
    if (a > b) return -adaptive_simpson(f, b, a, tol);

    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    std::vector<Segment> stack{{a, b, fa, fm, fb, simpson(a, b, fa, fm, fb), tol.abs}};

    double total = 0.0;
    std::size_t splits = 0;
    while (!stack.empty()) {
        const Segment s = stack.back();
        stack.pop_back();
        const double m = 0.5 * (s.a + s.b);
        const double flm = f(0.5 * (s.a + m));
        const double frm = f(0.5 * (m + s.b));
        const double left = simpson(s.a, m, s.fa, flm, s.fm);
        const double right = simpson(m, s.b, s.fm, frm, s.fb);
        const double refined = left + right;
        const double err = refined - s.whole;
        if (!std::isfinite(refined))
            throw QuadratureFailure("integrand is not finite on [" + std::to_string(s.a) + ", " +
                                    std::to_string(s.b) + "]");

        const double target = std::max(s.eps, tol.rel * std::abs(refined));
        if (std::abs(err) <= 15.0 * target || m <= s.a || m >= s.b) {
            total += refined + err / 15.0;
            continue;
        }
        if (++splits > tol.max_subdivisions)
            throw QuadratureFailure("adaptive Simpson exceeded " +
                                    std::to_string(tol.max_subdivisions) + " subdivisions on [" +
                                    std::to_string(a) + ", " + std::to_string(b) + "]");
        stack.push_back({m, s.b, s.fm, frm, s.fb, right, 0.5 * s.eps});
        stack.push_back({s.a, m, s.fa, flm, s.fm, left, 0.5 * s.eps});
    }
    return total;
}

}  // namespace quadlin
