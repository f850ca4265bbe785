#include "quadlin/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Dense>

#include "quadlin/report.hpp"

namespace quadlin {

AlphaTable recover_alpha(const QuadEquation& eq, const LinearizabilityReport& report,
                         const AlphaOptions& options) {
    if (!report.passed && !options.force)
        throw InputError("alpha recovery needs an equation that passed the necessary conditions");
    if (options.knots < 4) throw InputError("alpha table needs at least 4 knots");

    const Interval box = eq.box();
    const std::array<double, 2> frozen = options.frozen.value_or(std::array{box.mid(), box.mid()});
    const std::size_t slot = options.relation == AlphaRelation::u10 ? 1 : 2;

    // The constant factor (A or B) cancels in the normalization below.
    auto raw = [eq, frozen, slot](double x) {
        const Dual f = eq.partials(x, frozen[0], frozen[1]);
        if (std::abs(f.d[0]) < QuadEquation::kGuard)
            throw DegenerateDerivative("F,u00 vanishes at x = " + format_number(x));
        return f.d[slot] / f.d[0];
    };

    AlphaTable table;
    table.x_ref = box.mid();
    const double ref = raw(table.x_ref);
    if (!(std::abs(ref) > 0.0) || !std::isfinite(ref))
        throw DegenerateDerivative("alpha vanishes at the reference point");

    const std::size_t k = options.knots;
    table.x.resize(k);
    table.alpha.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        double x = box.lo + box.width() * static_cast<double>(i) / static_cast<double>(k - 1);
        if (k % 2 == 1 && i == k / 2) x = table.x_ref;
        const double a = raw(x) / ref;
        if (!(a > 0.0) || !std::isfinite(a))
            throw SignChange("alpha changes sign between x_ref and x = " + format_number(x));
        table.x[i] = x;
        table.alpha[i] = a;
    }
    table.extend = [raw, ref](double x) { return raw(x) / ref; };
    return table;
}

// ---------------------------------------------------------------------------

PointTransform::PointTransform(AlphaTable table, QuadratureTolerance tol)
    : table_(std::move(table)), tol_(tol) {
    const auto& xs = table_.x;
    const auto& as = table_.alpha;
    if (xs.size() != as.size() || xs.size() < 4)
        throw InputError("alpha table needs at least 4 (x, alpha) pairs");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1])) throw InputError("alpha table knots must increase strictly");
    if (!(table_.x_ref >= xs.front() && table_.x_ref <= xs.back()))
        throw InputError("x_ref lies outside the alpha table");
    for (std::size_t i = 0; i < as.size(); ++i)
        if (!std::isfinite(as[i]) || as[i] == 0.0 || std::signbit(as[i]) != std::signbit(as[0]))
            throw SignChange("alpha changes sign at x = " + format_number(xs[i]));

    cumulative_.assign(xs.size(), 0.0);
    for (std::size_t i = 1; i < xs.size(); ++i)
        cumulative_[i] = cumulative_[i - 1] + integrate(xs[i - 1], xs[i], true);
    offset_ = raw_inside(table_.x_ref);

    monotone_ = true;
    const bool up = cumulative_[1] > cumulative_[0];
    for (std::size_t i = 1; i < xs.size(); ++i)
        if ((cumulative_[i] > cumulative_[i - 1]) != up || cumulative_[i] == cumulative_[i - 1])
            monotone_ = false;
}

double PointTransform::interpolated_alpha(double x) const {
    const auto& xs = table_.x;
    const auto& as = table_.alpha;
    const std::ptrdiff_t last = static_cast<std::ptrdiff_t>(xs.size()) - 1;
    std::ptrdiff_t i = std::upper_bound(xs.begin(), xs.end(), x) - xs.begin() - 1;
    i = std::clamp<std::ptrdiff_t>(i, 0, last - 1);
    const auto start = static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i - 1, 0, last - 3));

    double sum = 0.0;
    for (std::size_t a = start; a < start + 4; ++a) {
        double w = as[a];
        for (std::size_t b = start; b < start + 4; ++b)
            if (b != a) w *= (x - xs[b]) / (xs[a] - xs[b]);
        sum += w;
    }
    return sum;
}

double PointTransform::extended_alpha(double x) const {
    if (!table_.extend)
        throw DomainError("outside the alpha table", "Psi", {x});
    const double a = table_.extend(x);
    if (!std::isfinite(a) || a == 0.0 || std::signbit(a) != std::signbit(table_.alpha[0]))
        throw DomainError("alpha is not single-signed beyond the table", "Psi", {x});
    return a;
}

double PointTransform::alpha(double x) const {
    if (x >= table_.x.front() && x <= table_.x.back()) return interpolated_alpha(x);
    return extended_alpha(x);
}

double PointTransform::integrate(double a, double b, bool inside) const {
    const bool negative = std::signbit(table_.alpha[0]);
    std::function<double(double)> f;
    if (inside)
        f = [this, negative](double t) {
            const double al = interpolated_alpha(t);
            if (al == 0.0 || std::signbit(al) != negative)
                throw SignChange("interpolated alpha changes sign at x = " + format_number(t));
            return 1.0 / al;
        };
    else
        f = [this](double t) { return 1.0 / extended_alpha(t); };
    return adaptive_simpson(f, a, b, tol_);
}

double PointTransform::raw_inside(double x) const {
    const auto& xs = table_.x;
    std::size_t i = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin());
    i = std::clamp<std::size_t>(i, 1, xs.size() - 1) - 1;
    return cumulative_[i] + integrate(xs[i], x, true);
}

std::vector<double> PointTransform::knot_values() const {
    std::vector<double> out(cumulative_.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = scale_ * (cumulative_[i] - offset_) + shift_;
    return out;
}

double PointTransform::operator()(double x) const {
    return (*this)(std::span<const double>(&x, 1)).front();
}

std::vector<double> PointTransform::operator()(std::span<const double> xs) const {
    const double lo = table_.x.front();
    const double hi = table_.x.back();
    std::vector<double> raw(xs.size());
    std::vector<std::size_t> above, below;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = xs[i];
        if (!std::isfinite(x)) throw DomainError("non-finite argument", "Psi", {x});
        if (x > hi)
            above.push_back(i);
        else if (x < lo)
            below.push_back(i);
        else
            raw[i] = raw_inside(x);
    }

    std::sort(above.begin(), above.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    double prev = hi;
    double acc = cumulative_.back();
    for (std::size_t i : above) {
        acc += integrate(prev, xs[i], false);
        prev = xs[i];
        raw[i] = acc;
    }

    std::sort(below.begin(), below.end(), [&](std::size_t a, std::size_t b) { return xs[a] > xs[b]; });
    prev = lo;
    acc = cumulative_.front();
    for (std::size_t i : below) {
        acc -= integrate(xs[i], prev, false);
        prev = xs[i];
        raw[i] = acc;
    }

    for (double& v : raw) v = scale_ * (v - offset_) + shift_;
    return raw;
}

PointTransform PointTransform::gauge(double lambda, double mu) const {
    if (lambda == 0.0 || !std::isfinite(lambda) || !std::isfinite(mu))
        throw InputError("gauge needs finite lambda != 0 and finite mu");
    PointTransform out(*this);
    out.scale_ = lambda * scale_;
    out.shift_ = lambda * shift_ + mu;
    return out;
}

PointTransform build_psi(const AlphaTable& table, const QuadratureTolerance& tol) {
    return PointTransform(table, tol);
}

// ---------------------------------------------------------------------------

LinearModel fit_linear_model(const QuadEquation& eq, const PointTransform& psi,
                             const FitOptions& options) {
    if (options.n_samples < 4) throw InputError("fit needs at least 4 samples");
    if (!(options.tol > 0.0)) throw InputError("certification tolerance must be positive");

    const Interval box = eq.box();
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> dist(box.lo, box.hi);

    const auto n = static_cast<Eigen::Index>(options.n_samples);
    Eigen::MatrixXd design(n, 4);
    Eigen::VectorXd target(n);
    Eigen::Index rows = 0;
    double largest = 0.0;
    const std::size_t budget = 10 * options.n_samples;
    for (std::size_t attempt = 0; attempt < budget && rows < n; ++attempt) {
        const std::array<double, 4> pt{dist(rng), dist(rng), dist(rng), 0.0};
        std::array<double, 4> mapped{};
        try {
            const std::array<double, 4> args{pt[0], pt[1], pt[2], eq(pt[0], pt[1], pt[2])};
            const std::vector<double> w = psi(args);
            std::copy(w.begin(), w.end(), mapped.begin());
        } catch (const DomainError&) {
            continue;
        } catch (const DegenerateDerivative&) {
            continue;
        }
        design.row(rows) << mapped[0], mapped[1], mapped[2], 1.0;
        target(rows) = mapped[3];
        for (double v : mapped) largest = std::max(largest, std::abs(v));
        ++rows;
    }
    if (rows < n)
        throw DomainError("only " + std::to_string(rows) + " of " + std::to_string(n) +
                              " samples map into the domain of Psi",
                          "Psi", {});

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(1e-10);
    if (qr.rank() < 4)
        throw RankDeficient("design matrix has rank " + std::to_string(qr.rank()) + " < 4");
    const Eigen::Vector4d c = qr.solve(target);
    const double worst = (design * c - target).cwiseAbs().maxCoeff();

    LinearModel model;
    model.p = c(0);
    model.q = c(1);
    model.r = c(2);
    model.s = c(3);
    model.fit_residual = worst / (1.0 + largest);
    model.tol = options.tol;
    model.certified = model.fit_residual <= options.tol;
    model.samples = options.n_samples;
    return model;
}

void require_certified(const LinearModel& model) {
    if (!model.certified)
        throw CertificationFailure("fit residual " + format_number(model.fit_residual) +
                                   " exceeds the certification tolerance " +
                                   format_number(model.tol));
}

Roundtrip roundtrip_verify(const QuadEquation& eq, const PointTransform& psi,
                           const LinearModel& model, std::size_t n, std::size_t m,
                           std::uint64_t seed) {
    require_certified(model);
    const Interval box = eq.box();
    const Grid init = make_staircase(n, m, SeededStaircase{seed, box.lo, box.hi});

    Roundtrip out;
    out.u = evolve_quad(eq.rhs(), init);

    const std::vector<double> w = psi(out.u.values());
    out.mapped = Grid(n, m);
    for (std::size_t j = 0; j <= m; ++j)
        for (std::size_t i = 0; i <= n; ++i)
            out.mapped.set(i, j, w[j * (n + 1) + i], out.u.kind(i, j));

    const LinearModel k = model;
    out.linear = evolve(
        [k](double a, double b, double c) { return k.p * a + k.q * b + k.r * c + k.s; },
        out.mapped.staircase());

    for (std::size_t j = 0; j <= m; ++j)
        for (std::size_t i = 0; i <= n; ++i) {
            const double a = out.mapped(i, j);
            const double d = std::abs(a - out.linear(i, j)) / std::max(1.0, std::abs(a));
            out.discrepancy = std::max(out.discrepancy, d);
        }
    return out;
}

nlohmann::ordered_json to_json(const PointTransform& psi, const LinearModel& model) {
    nlohmann::ordered_json j;
    j["x_ref"] = psi.x_ref();
    auto knots = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < psi.table().x.size(); ++i)
        knots.push_back({psi.table().x[i], psi.table().alpha[i]});
    j["knots"] = std::move(knots);
    j["model"] = {{"p", model.p}, {"q", model.q}, {"r", model.r}, {"s", model.s},
                  {"residual", model.fit_residual}};
    return j;
}

}  // namespace quadlin
