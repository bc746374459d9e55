#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "moduli_lab/conjugacy.hpp"
#include "moduli_lab/hopf.hpp"
#include "moduli_lab/jet.hpp"
#include "moduli_lab/mat2.hpp"
#include "moduli_lab/torus.hpp"

namespace moduli_lab::family {

enum class Model { Hopf, Torus, HirzebruchF2 };

inline const char* to_string(Model m) {
    switch (m) {
        case Model::Hopf: return "hopf";
        case Model::Torus: return "torus";
        case Model::HirzebruchF2: return "hirzebruch_f2";
    }
    return "?";
}

enum class Tri { Yes, No, Unknown };

inline const char* to_string(Tri v) {
    switch (v) {
        case Tri::Yes: return "Yes";
        case Tri::No: return "No";
        case Tri::Unknown: return "Unknown";
    }
    return "?";
}

/// Membership in the model's parameter space. Points of the F2 Kuranishi disk
/// are stored as z * Id.
inline bool in_model(Model m, const Mat2& p) {
    switch (m) {
        case Model::Hopf: return hopf::in_kuranishi(p);
        case Model::Torus: return torus::in_moduli(p);
        case Model::HirzebruchF2: return is_scalar(p, 0.0) && std::abs(p[0]) < 1.0;
    }
    return false;
}

/// Pull-back of a base family along a covering t -> c(t), c(0) = 0.
struct Pullback {
    std::string base_label;
    jet::Jet covering;
};

/// One-parameter family t -> point of a moduli model, t in [lo, hi].
struct FamilyPath {
    Model model = Model::Hopf;
    double lo = 0.0;
    double hi = 0.0;
    std::function<Mat2(double)> evaluator;
    std::string label;
    std::string closed_form;
    /// Jet at 0 of t -> vec(point(t) - point(0)) in C^4, when the family is analytic there.
    std::optional<jet::Jet> germ;
    std::optional<Pullback> pullback;

    bool contains(double t) const { return t >= lo && t <= hi; }

    Mat2 at(double t) const {
        if (!contains(t)) throw std::domain_error("FamilyPath " + label + ": parameter outside the domain");
        const Mat2 p = evaluator(t);
        if (!in_model(model, p)) throw std::domain_error("FamilyPath " + label + ": point outside the model");
        return p;
    }
};

/// Germ in C^4 of t -> A(t) - A(0) for a matrix polynomial with coefficient matrices `coeffs[k]` of t^k.
inline jet::Jet matrix_germ(const std::vector<Mat2>& coeffs, int order = jet::default_order) {
    jet::Jet g(4, order);
    for (std::size_t k = 1; k < coeffs.size() && int(k) <= order; ++k)
        for (int i = 0; i < 4; ++i) g(i, int(k)) = coeffs[k][i];
    return g;
}

// Hopf families around 2 Id.

/// [[2+t, t], [0, 2+t]]; t = -0.5 would put Tr on the boundary |Tr| = 3.
inline FamilyPath hopf_linear_family() {
    const Mat2 n{0.0, 1.0, 0.0, 0.0};
    return {Model::Hopf, -0.45, 0.5,
            [](double t) { return Mat2{2.0 + t, t, 0.0, 2.0 + t}; },
            "X1", "[[2+t, t], [0, 2+t]]",
            matrix_germ({Mat2::scalar(2.0), Mat2::identity() + n}), std::nullopt};
}

/// [[2+t, t^3], [0, 2+t]].
inline FamilyPath hopf_cubic_family() {
    const Mat2 n{0.0, 1.0, 0.0, 0.0};
    return {Model::Hopf, -0.45, 0.5,
            [](double t) { return Mat2{2.0 + t, t * t * t, 0.0, 2.0 + t}; },
            "X2", "[[2+t, t^3], [0, 2+t]]",
            matrix_germ({Mat2::scalar(2.0), Mat2::identity(), Mat2::zero(), n}), std::nullopt};
}

/// Jumping family [[2, t], [0, 2]] in the closure of the leaf phi^{-1}(4, 0).
inline FamilyPath hopf_jumping_family() {
    return {Model::Hopf, -1.0, 1.0,
            [](double t) { return Mat2{2.0, t, 0.0, 2.0}; },
            "J", "[[2, t], [0, 2]]",
            matrix_germ({Mat2::scalar(2.0), Mat2{0.0, 1.0, 0.0, 0.0}}), std::nullopt};
}

/// Pull-back of `base` by t -> t^n.
inline FamilyPath pullback_by_power(const FamilyPath& base, int n) {
    if (n < 1) throw std::invalid_argument("pullback_by_power: degree must be positive");
    if (!base.germ) throw std::invalid_argument("pullback_by_power: base family has no germ");
    const double r = std::min(std::abs(base.lo), std::abs(base.hi));
    const double reach = std::pow(r, 1.0 / n);
    const jet::Jet cover = jet::Jet::monomial(n, base.germ->order());
    auto eval = base.evaluator;
    return {base.model, (n % 2 == 0 || base.lo < 0.0) ? -reach : 0.0, reach,
            [eval, n](double t) { return eval(std::pow(t, n)); },
            base.label + "^*(t^" + std::to_string(n) + ")",
            base.closed_form + " at t^" + std::to_string(n),
            jet::compose(*base.germ, cover), Pullback{base.label, cover}};
}

inline FamilyPath hopf_constant_family(const Mat2& a, double lo = -1.0, double hi = 1.0) {
    return {Model::Hopf, lo, hi, [a](double) { return a; }, "const", "constant", matrix_germ({a}), std::nullopt};
}

// Torus families Omega_1, Omega_2.

inline FamilyPath torus_omega1_family(const torus::FlatFunctionParams& p) {
    p.validate();
    return {Model::Torus, -0.95, 0.95,
            [p](double t) { return torus::omega1(t, p).period(); },
            "Omega1", "[[i+t, b(t)], [c(t), i+t]]", std::nullopt, std::nullopt};
}

inline FamilyPath torus_omega2_family(const torus::FlatFunctionParams& p) {
    p.validate();
    return {Model::Torus, -0.95, 0.95,
            [p](double t) { return torus::omega2(t, p).period(); },
            "Omega2",
            p.variant == torus::Variant::transpose_split ? "Omega1(t) for t <= 0, transpose for t >= 0"
                                                         : "transpose of Omega1 on |t| in [t_{2n-1}, t_{2n}]",
            std::nullopt, std::nullopt};
}

/// Probe parameters where |b - c| stays resolvable at the default tolerance,
/// both signs, interleaved: variant 1 |t| = 0.6 * 0.75^k, k = 0..7; variant 2
/// |t| = exp(-s), s = k + {0.4, 0.5, 0.6}, k = 0..2.
inline std::vector<double> torus_probe_samples(torus::Variant v) {
    std::vector<double> out;
    if (v == torus::Variant::transpose_split) {
        for (int k = 0; k < 8; ++k) {
            const double r = 0.6 * std::pow(0.75, k);
            out.push_back(r);
            out.push_back(-r);
        }
    } else {
        for (int k = 0; k < 3; ++k)
            for (double f : {0.4, 0.5, 0.6}) {
                const double r = std::exp(-(k + f));
                out.push_back(r);
                out.push_back(-r);
            }
    }
    return out;
}

/// Dyadic sequence 2^-k, k = 1..count.
inline std::vector<double> dyadic_samples(int count = 12) {
    std::vector<double> out;
    for (int k = 1; k <= count; ++k) out.push_back(std::ldexp(1.0, -k));
    return out;
}

/// F2 Kuranishi disk: t -> t (as t Id); nonzero points are P1 x P1.
inline FamilyPath hirzebruch_family() {
    return {Model::HirzebruchF2, -0.9, 0.9, [](double t) { return Mat2::scalar(t); }, "F2-disk", "t", std::nullopt,
            std::nullopt};
}

// Witness traces.

struct WitnessSample {
    double t = 0.0;
    bool found = false;
    std::optional<Mat2> conjugator;        // Hopf: A1 P = P A2, det P = 1
    std::optional<torus::IntMat4> gamma;   // Torus: A1 . gamma = A2
    std::string witness_class;
    double witness_norm = 0.0;
    double residual = 0.0;
    /// Torus: every witness found within the bound, sign-normalized and deduplicated.
    std::vector<torus::IntMat4> class_members;
};

struct WitnessTrace {
    Model model = Model::Hopf;
    std::vector<WitnessSample> samples;
    /// Yes when every sample has a witness; No when a sample provably has none
    /// (Hopf, F2); Unknown when a bounded search came back empty (Torus).
    Tri pointwise = Tri::Unknown;
};

inline std::string gamma_name(const torus::IntMat4& g) {
    if (g == torus::IntMat4::identity()) return "Id";
    if (g == -torus::IntMat4::identity()) return "-Id";
    if (g == torus::IntMat4::swap()) return "swap";
    if (g == -torus::IntMat4::swap()) return "-swap";
    std::ostringstream os;
    os << g;
    return os.str();
}

namespace detail {

inline WitnessSample hopf_sample(double t, const Mat2& a, const Mat2& b, double tol) {
    WitnessSample s;
    s.t = t;
    const auto best = min_norm_conjugator(a, b, ConjugacyOptions{tol, true});
    if (!best) return s;
    s.found = true;
    s.conjugator = best->matrix;
    s.witness_norm = best->norm;
    s.residual = conjugacy_residual(a, b, best->matrix);
    s.witness_class = std::string(to_string(best->kind)) + "/" + std::to_string(best->branch);
    if (s.residual > 1e3 * tol * (frobenius_norm(a) + frobenius_norm(b)) || std::abs(det(best->matrix) - 1.0) > 1e-6)
        throw model_inconsistency("pointwise_iso_sweep: conjugator fails verification");
    return s;
}

inline WitnessSample torus_sample(double t, const Mat2& a, const Mat2& b, int bound, double tol) {
    WitnessSample s;
    s.t = t;
    const torus::TorusPoint pa(a), pb(b);
    const auto all = torus::equivalences(pa, pb, bound, tol);
    if (all.empty()) return s;
    s.found = true;
    s.gamma = all.front();
    s.residual = torus::act_residual(pa, all.front(), pb);
    double n2 = 0.0;
    for (auto x : all.front().entries()) n2 += double(x) * double(x);
    s.witness_norm = std::sqrt(n2);
    std::set<std::array<std::int64_t, 16>> seen;
    for (const auto& g : all) {
        const auto n = g.sign_normalized();
        if (seen.insert(n.entries()).second) s.class_members.push_back(n);
    }
    for (std::size_t k = 0; k < s.class_members.size(); ++k)
        s.witness_class += (k ? "|" : "") + std::string("+-") + gamma_name(s.class_members[k]);
    return s;
}

inline WitnessSample f2_sample(double t, const Mat2& a, const Mat2& b) {
    WitnessSample s;
    s.t = t;
    const bool za = a[0] == complex{0.0}, zb = b[0] == complex{0.0};
    if (za != zb) return s;
    s.found = true;
    s.witness_class = za ? "F2" : "P1xP1";
    return s;
}

}  // namespace detail

/// Per-t isomorphism witnesses between F1(t) and F2(t).
inline WitnessTrace pointwise_iso_sweep(const FamilyPath& f1, const FamilyPath& f2, const std::vector<double>& grid,
                                        int bound = 2, double tol = default_tol) {
    if (f1.model != f2.model) throw std::invalid_argument("pointwise_iso_sweep: families live in different models");
    WitnessTrace trace;
    trace.model = f1.model;
    bool all = true, provably_missing = false;
    for (double t : grid) {
        const Mat2 a = f1.at(t), b = f2.at(t);
        WitnessSample s;
        switch (f1.model) {
            case Model::Hopf: s = detail::hopf_sample(t, a, b, tol); break;
            case Model::Torus: s = detail::torus_sample(t, a, b, bound, tol); break;
            case Model::HirzebruchF2: s = detail::f2_sample(t, a, b); break;
        }
        if (!s.found) {
            all = false;
            if (f1.model != Model::Torus) provably_missing = true;
        }
        trace.samples.push_back(std::move(s));
    }
    trace.pointwise = all ? Tri::Yes : (provably_missing ? Tri::No : Tri::Unknown);
    return trace;
}

struct Verdict {
    bool pointwise_iso = false;
    Tri locally_iso = Tri::Unknown;
    Tri locally_equivalent = Tri::Unknown;
    std::string diagnosis;
    WitnessTrace trace;
    /// Hopf divergence fit: slope of log |P| against log |t|.
    std::optional<double> slope;
    /// The single witness that continues across the window, when one exists.
    std::optional<Mat2> continued_conjugator;
    std::optional<torus::IntMat4> continued_gamma;
    /// Human-readable evidence lines.
    std::vector<std::string> notes;
};

/// Least-squares slope of y against x.
inline double regression_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = double(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

inline constexpr double divergence_slope = -0.9;
inline constexpr std::size_t divergence_min_samples = 8;
inline constexpr double divergence_min_norm = 10.0;

namespace detail {

inline void hopf_probe(const FamilyPath& f1, const FamilyPath& f2, double tol, Verdict& v) {
    const auto& samples = v.trace.samples;
    // Continuation: one conjugator valid at every sample (and at 0 when sampled in the domain).
    std::vector<double> ts;
    for (const auto& s : samples) ts.push_back(s.t);
    if (f1.contains(0.0) && f2.contains(0.0)) ts.push_back(0.0);
    for (const auto& s : samples) {
        const Mat2& p = *s.conjugator;
        const bool works = std::all_of(ts.begin(), ts.end(), [&](double t) {
            const Mat2 a = f1.at(t), b = f2.at(t);
            return conjugacy_residual(a, b, p) <= tol * (frobenius_norm(a) + frobenius_norm(b));
        });
        if (works) {
            v.locally_iso = Tri::Yes;
            v.diagnosis = "continuation-success";
            v.continued_conjugator = p;
            return;
        }
    }
    std::vector<double> lx, ly;
    for (const auto& s : samples) {
        if (s.t == 0.0) continue;
        lx.push_back(std::log(std::abs(s.t)));
        ly.push_back(std::log(s.witness_norm));
    }
    if (lx.size() >= 2) v.slope = regression_slope(lx, ly);
    const auto closest = std::min_element(samples.begin(), samples.end(),
                                          [](const auto& x, const auto& y) { return std::abs(x.t) < std::abs(y.t); });
    const bool diverges = lx.size() >= divergence_min_samples && v.slope && *v.slope <= divergence_slope &&
                          closest->witness_norm >= divergence_min_norm;
    if (diverges) {
        v.locally_iso = Tri::No;
        v.diagnosis = "divergence";
        return;
    }
    v.diagnosis = "inconclusive";
}

inline bool disjoint(const std::vector<torus::IntMat4>& x, const std::vector<torus::IntMat4>& y) {
    for (const auto& g : x)
        if (std::find(y.begin(), y.end(), g) != y.end()) return false;
    return true;
}

inline void torus_probe(const FamilyPath& f1, const FamilyPath& f2, int bound, double tol, Verdict& v) {
    const auto& samples = v.trace.samples;
    // Continuation: a witness common to every sample, also valid at 0.
    std::vector<torus::IntMat4> common = samples.front().class_members;
    for (const auto& s : samples) {
        std::vector<torus::IntMat4> keep;
        for (const auto& g : common)
            if (std::find(s.class_members.begin(), s.class_members.end(), g) != s.class_members.end()) keep.push_back(g);
        common = keep;
    }
    if (f1.contains(0.0) && f2.contains(0.0)) {
        const torus::TorusPoint a0(f1.at(0.0)), b0(f2.at(0.0));
        std::erase_if(common, [&](const torus::IntMat4& g) { return torus::act_residual(a0, g, b0) > tol; });
    }
    if (!common.empty()) {
        std::sort(common.begin(), common.end(), torus::canonical_less);
        v.locally_iso = Tri::Yes;
        v.diagnosis = "continuation-success";
        v.continued_gamma = common.front();
        return;
    }
    // Class jump: two disjoint witness classes, each seen at least twice, whose
    // |t| ranges interleave, with different linear parts at the limit point.
    std::map<std::string, std::vector<const WitnessSample*>> classes;
    for (const auto& s : samples) classes[s.witness_class].push_back(&s);
    if (!f1.contains(0.0)) {
        v.diagnosis = "inconclusive";
        return;
    }
    const torus::TorusPoint limit(f1.at(0.0));
    for (auto i = classes.begin(); i != classes.end(); ++i) {
        for (auto j = std::next(i); j != classes.end(); ++j) {
            const auto& x = i->second;
            const auto& y = j->second;
            if (x.size() < 2 || y.size() < 2) continue;
            if (!disjoint(x.front()->class_members, y.front()->class_members)) continue;
            auto range = [](const std::vector<const WitnessSample*>& ss) {
                double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
                for (const auto* s : ss) {
                    lo = std::min(lo, std::abs(s->t));
                    hi = std::max(hi, std::abs(s->t));
                }
                return std::pair{lo, hi};
            };
            const auto [xlo, xhi] = range(x);
            const auto [ylo, yhi] = range(y);
            if (!(xlo < yhi && ylo < xhi)) continue;
            double separation = std::numeric_limits<double>::infinity();
            for (const auto& g : x.front()->class_members)
                for (const auto& h : y.front()->class_members)
                    for (double sign : {1.0, -1.0})
                        separation = std::min(separation, frobenius_norm(torus::linear_part(limit, g) -
                                                                         sign * torus::linear_part(limit, h)));
            if (separation > 0.5) {
                v.locally_iso = Tri::No;
                v.diagnosis = "class-jump";
                v.notes.push_back("classes " + i->first + " and " + j->first + " separated by " +
                                  std::to_string(separation) + " at t = 0");
                return;
            }
        }
    }
    (void)bound;
    v.diagnosis = "inconclusive";
}

}  // namespace detail

/// Local isomorphism at 0 by witness continuation along t_seq -> 0.
inline Verdict local_iso_probe(const FamilyPath& f1, const FamilyPath& f2, const std::vector<double>& t_seq,
                               int bound = 2, double tol = default_tol) {
    Verdict v;
    v.trace = pointwise_iso_sweep(f1, f2, t_seq, bound, tol);
    v.pointwise_iso = v.trace.pointwise == Tri::Yes;
    if (t_seq.empty()) {
        v.diagnosis = "inconclusive";
        return v;
    }
    if (v.trace.pointwise == Tri::No) {
        v.locally_iso = Tri::No;
        v.diagnosis = "not-pointwise-isomorphic";
        return v;
    }
    if (v.trace.pointwise == Tri::Unknown) {
        v.diagnosis = "search-exhausted";
        return v;
    }
    switch (f1.model) {
        case Model::Hopf: detail::hopf_probe(f1, f2, tol, v); break;
        case Model::Torus: detail::torus_probe(f1, f2, bound, tol, v); break;
        case Model::HirzebruchF2: v.diagnosis = "inconclusive"; break;
    }
    if (v.locally_iso == Tri::Yes) v.locally_equivalent = Tri::Yes;
    return v;
}

/// Local equivalence at 0 (isomorphism up to reparametrizing the base).
///
/// Pull-backs of one family compare covering degrees. Otherwise, for Hopf
/// families whose traces separate fibers, a reparametrization must fix every
/// trace value, so equivalence reduces to isomorphism.
inline Verdict local_equivalence_probe(const FamilyPath& f1, const FamilyPath& f2, int reparam_degree_bound,
                                       const std::vector<double>& t_seq, int bound = 2, double tol = default_tol) {
    if (f1.pullback && f2.pullback && f1.pullback->base_label == f2.pullback->base_label) {
        Verdict v;
        v.trace = pointwise_iso_sweep(f1, f2, t_seq, bound, tol);
        v.pointwise_iso = v.trace.pointwise == Tri::Yes;
        const auto n1 = jet::normalize_covering(f1.pullback->covering);
        const auto n2 = jet::normalize_covering(f2.pullback->covering);
        v.notes.push_back("covering degrees " + std::to_string(n1.degree) + ", " + std::to_string(n2.degree));
        if (f1.germ && f2.germ) {
            const auto o1 = jet::vanishing_order(*f1.germ), o2 = jet::vanishing_order(*f2.germ);
            v.notes.push_back("germ vanishing orders " + (o1 ? std::to_string(*o1) : "none") + ", " +
                              (o2 ? std::to_string(*o2) : "none"));
        }
        if (std::max(n1.degree, n2.degree) > reparam_degree_bound) {
            v.diagnosis = "search-exhausted";
            return v;
        }
        if (jet::type2_verdict(n1.degree, n2.degree) == jet::Type2Verdict::NotEquivalent) {
            v.locally_iso = Tri::No;
            v.locally_equivalent = Tri::No;
            v.diagnosis = "covering-degree-mismatch";
            return v;
        }
        v.locally_equivalent = Tri::Yes;
        const bool same_cover = (f1.pullback->covering - f2.pullback->covering).max_norm() <= tol;
        v.locally_iso = same_cover && v.pointwise_iso ? Tri::Yes : Tri::Unknown;
        v.diagnosis = "covering-degree-match";
        return v;
    }

    Verdict v = local_iso_probe(f1, f2, t_seq, bound, tol);
    if (f1.model != Model::Hopf) return v;
    // Traces separate fibers: t -> Tr F(t) injective on the samples, and Tr F1 = Tr F2.
    bool separates = true;
    for (std::size_t i = 0; i < t_seq.size() && separates; ++i) {
        const complex ti = trace(f1.at(t_seq[i]));
        if (std::abs(ti - trace(f2.at(t_seq[i]))) > tol * std::abs(ti)) separates = false;
        for (std::size_t j = 0; j < i && separates; ++j)
            if (t_seq[i] != t_seq[j] && std::abs(ti - trace(f1.at(t_seq[j]))) <= tol * std::abs(ti)) separates = false;
    }
    if (separates) {
        v.locally_equivalent = v.locally_iso;
        v.notes.push_back("traces separate fibers; equivalence reduces to isomorphism");
    }
    return v;
}

// Transpose automorphism of the Jordan point.

struct TransposeLiftSample {
    double t = 0.0;
    /// [[2, t], [0, 2]] against its transpose: lines rep + q K.
    Det1Family jordan_family;
    /// diag(2, 2+t) against its transpose: hyperbola alpha e1 + e2 / alpha.
    Det1Family diagonal_family;
    /// Lower bound from entry (1, 2), computed from the recovered families.
    double closed_form_distance = 0.0;
    /// Infimum of the entrywise sup-distance over a grid of free parameters.
    double grid_distance = 0.0;
};

struct TransposeLiftReport {
    std::vector<TransposeLiftSample> samples;
    double min_distance = 0.0;
    bool pass = false;
};

namespace detail {

inline double entry_sup_distance(const Mat2& x, const Mat2& y) { return max_norm(x - y); }

inline bool near(complex x, complex y, double tol) { return std::abs(x - y) <= tol * (1.0 + std::abs(y)); }

}  // namespace detail

/// The intertwiners of the Jordan point with its transpose, {[[q, +-i], [+-i, 0]]},
/// stay at entrywise distance >= 1 from those of diag(2, 2+t), {diag(a, 1/a)}:
/// the transpose does not lift along t.
inline TransposeLiftReport transpose_lift_check(const std::vector<double>& t_grid, double tol = default_tol) {
    using detail::near;
    TransposeLiftReport report;
    report.min_distance = std::numeric_limits<double>::infinity();
    const complex i{0.0, 1.0};
    for (double t : t_grid) {
        if (t == 0.0) throw std::invalid_argument("transpose_lift_check: t = 0 is the scalar point");
        TransposeLiftSample s;
        s.t = t;
        const Mat2 jordan{2.0, t, 0.0, 2.0};
        const Mat2 diagonal = Mat2::diag(2.0, 2.0 + t);
        s.jordan_family = solve_conjugacy(jordan, jordan.transpose(), tol).det1_family;
        s.diagonal_family = solve_conjugacy(diagonal, diagonal.transpose(), tol).det1_family;

        const auto& fj = s.jordan_family;
        const Mat2& k = fj.direction;
        const bool k_ok = fj.kind == Det1Kind::lines && fj.branch_count() == 2 && std::abs(k[0]) > tol &&
                          std::abs(k[1]) <= tol && std::abs(k[2]) <= tol && std::abs(k[3]) <= tol;
        if (!k_ok) throw model_inconsistency("transpose_lift_check: Jordan family is not {rep + q E11}");
        std::vector<Mat2> bases;
        for (std::size_t b = 0; b < 2; ++b) {
            Mat2 p = fj.representatives[b];
            p = p + (-p[0] / k[0]) * k;  // zero (1,1) entry
            bases.push_back(p);
            if (!(near(p[1], p[2], tol) && (near(p[1], i, tol) || near(p[1], -i, tol)) && std::abs(p[3]) <= tol))
                throw model_inconsistency("transpose_lift_check: Jordan family base is not [[0, +-i], [+-i, 0]]");
        }
        if (!near(bases[0][1], -bases[1][1], tol))
            throw model_inconsistency("transpose_lift_check: Jordan branches are not opposite");

        const auto& fd = s.diagonal_family;
        auto diagonal_only = [&](const Mat2& m) { return std::abs(m[1]) <= tol && std::abs(m[2]) <= tol; };
        const bool d_ok = fd.kind == Det1Kind::hyperbola && diagonal_only(fd.e1) && diagonal_only(fd.e2) &&
                          ((std::abs(fd.e1[3]) <= tol && std::abs(fd.e2[0]) <= tol) ||
                           (std::abs(fd.e1[0]) <= tol && std::abs(fd.e2[3]) <= tol)) &&
                          near(fd.e1[0] * fd.e2[3] + fd.e1[3] * fd.e2[0], 1.0, tol);
        if (!d_ok) throw model_inconsistency("transpose_lift_check: diagonal family is not {diag(a, 1/a)}");

        // Entry (1,2): +-i + q K12 on one side, 0 on the other, and K12 = 0.
        s.closed_form_distance = std::min(std::abs(bases[0][1]), std::abs(bases[1][1]));

        double inf = std::numeric_limits<double>::infinity();
        for (int r1 = -8; r1 <= 8; ++r1)
            for (int a1 = 0; a1 < 8; ++a1) {
                const complex q = std::polar(std::pow(2.0, r1 / 2.0), a1 * std::numbers::pi / 4.0);
                for (const auto& base : bases) {
                    const Mat2 p = base + q * k;
                    for (int r2 = -8; r2 <= 8; ++r2)
                        for (int a2 = 0; a2 < 8; ++a2) {
                            const complex alpha = std::polar(std::pow(2.0, r2 / 2.0), a2 * std::numbers::pi / 4.0);
                            inf = std::min(inf, detail::entry_sup_distance(p, fd.member(0, alpha)));
                        }
                }
            }
        s.grid_distance = inf;
        report.min_distance = std::min({report.min_distance, s.closed_form_distance, s.grid_distance});
        report.samples.push_back(std::move(s));
    }
    report.pass = !report.samples.empty() && report.min_distance >= 1.0 - tol;
    return report;
}

// Fischer-Grauert: the leaf of 2 Id contains no non-constant path.

using SameSurfaceOracle = std::function<bool(const Mat2&, const Mat2&)>;

struct FischerGrauertResult {
    bool holds = false;
    bool all_fibers_isomorphic = false;
    double max_deviation = 0.0;
};

/// True iff "every fiber is the surface of F(0)" implies "F is constant" on the grid.
inline FischerGrauertResult fischer_grauert_check(const FamilyPath& f, const std::vector<double>& grid,
                                                  double tol = default_tol,
                                                  const std::optional<SameSurfaceOracle>& oracle = std::nullopt) {
    if (f.model != Model::Hopf) throw std::invalid_argument("fischer_grauert_check: Hopf family expected");
    const Mat2 base = f.at(0.0);
    const SameSurfaceOracle same = oracle ? *oracle : SameSurfaceOracle([tol](const Mat2& a, const Mat2& b) {
        return hopf::same_hopf_surface(hopf::HopfPoint(a), hopf::HopfPoint(b), tol);
    });
    FischerGrauertResult r;
    r.all_fibers_isomorphic = true;
    for (double t : grid) {
        const Mat2 a = f.at(t);
        r.max_deviation = std::max(r.max_deviation, frobenius_norm(a - base));
        if (!same(a, base)) r.all_fibers_isomorphic = false;
    }
    r.holds = !r.all_fibers_isomorphic || r.max_deviation <= tol * (1.0 + frobenius_norm(base));
    return r;
}

// Stratification and foliation per model.

struct Stratum {
    std::string name;
    /// dim K(t) on the stratum.
    int kuranishi_dim = 0;
    /// Dimension of the stratum inside K.
    int dim = 0;
    std::string predicate;
    /// h0(t) on the stratum.
    int h0 = 0;
    /// Leaf dimension of the foliation on the stratum: dim K - dim K(t).
    int leaf_dim = 0;
};

struct ModelSummary {
    Model model = Model::Hopf;
    int kuranishi_dim = 0;
    std::vector<Stratum> strata;
    bool h0_constant = false;
    bool foliation_trivial = false;
};

inline ModelSummary model_summary(Model m) {
    ModelSummary s;
    s.model = m;
    switch (m) {
        case Model::Torus:
            // Versal at every point; h0 = 4 from translations.
            s.kuranishi_dim = 4;
            s.strata = {{"K", 4, 4, "det Im A > 0", 4, 0}};
            break;
        case Model::HirzebruchF2:
            // h0(F2) = 7, h0(P1 x P1) = 6.
            s.kuranishi_dim = 1;
            s.strata = {{"{0}", 1, 0, "t = 0", 7, 0}, {"D*", 0, 1, "0 < |t| < 1", 6, 1}};
            break;
        case Model::Hopf: {
            s.kuranishi_dim = 4;
            const hopf::HopfPoint scalar(Mat2::scalar(2.0));
            const hopf::HopfPoint jordan(Mat2{2.0, 1.0, 0.0, 2.0});
            s.strata = {{"K4", hopf::kuranishi_dim(scalar), 1, "A = lambda Id, |lambda| > 3/2", hopf::h0(scalar), 0},
                        {"K2", hopf::kuranishi_dim(jordan), 4, "A not scalar", hopf::h0(jordan), 0}};
            for (auto& st : s.strata) st.leaf_dim = s.kuranishi_dim - st.kuranishi_dim;
            break;
        }
    }
    s.h0_constant = std::all_of(s.strata.begin(), s.strata.end(), [&](const Stratum& x) { return x.h0 == s.strata[0].h0; });
    s.foliation_trivial = std::all_of(s.strata.begin(), s.strata.end(), [](const Stratum& x) { return x.leaf_dim == 0; });
    // h0 - dim K(t) is constant along K, which ties the two properties together.
    for (const auto& x : s.strata)
        if (x.h0 - x.kuranishi_dim != s.strata[0].h0 - s.strata[0].kuranishi_dim)
            throw model_inconsistency("model_summary: h0 - dim K(t) is not constant");
    if (s.foliation_trivial != s.h0_constant)
        throw model_inconsistency("model_summary: foliation triviality and h0 constancy disagree");
    return s;
}

inline std::vector<Model> all_models() { return {Model::Hopf, Model::Torus, Model::HirzebruchF2}; }

}  // namespace moduli_lab::family
