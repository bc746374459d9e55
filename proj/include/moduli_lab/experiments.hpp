#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "moduli_lab/conjugacy.hpp"
#include "moduli_lab/family.hpp"
#include "moduli_lab/hopf.hpp"
#include "moduli_lab/jet.hpp"
#include "moduli_lab/report.hpp"
#include "moduli_lab/torus.hpp"

namespace moduli_lab::experiments {

using report::Check;
using report::ExperimentReport;
using report::json;

/// Options shared by every experiment; `grid` falls back to a per-experiment default.
struct RunOptions {
    double tol = default_tol;
    int bound = 2;
    std::optional<int> grid;
    std::uint64_t seed = 1;
    torus::Variant variant = torus::Variant::transpose_split;
    int n = 2;
    int m = 3;
    family::Model model = family::Model::Hopf;
};

inline const std::vector<std::string>& experiment_ids() {
    static const std::vector<std::string> ids{"hopf-leaf",     "hopf-counterexample", "hopf-transpose-lift",
                                              "hopf-fg",       "torus-counterexample", "jets-degree",
                                              "lemma7-density", "stratify"};
    return ids;
}

inline int default_grid(const std::string& id) {
    if (id == "hopf-leaf") return 1000;
    if (id == "hopf-counterexample") return 12;
    if (id == "hopf-transpose-lift") return 8;
    if (id == "hopf-fg") return 21;
    if (id == "torus-counterexample") return 5;
    if (id == "jets-degree") return 100;
    if (id == "lemma7-density") return 200;
    if (id == "stratify") return 500;
    throw std::invalid_argument("unknown experiment: " + id);
}

namespace detail {

/// Accumulates checks; the report passes iff every check does.
class Builder {
public:
    Builder(std::string id, const RunOptions& o, std::string provenance) {
        doc_["experiment"] = std::move(id);
        json p;
        p["tol"] = o.tol;
        p["bound"] = o.bound;
        p["grid"] = o.grid.value_or(default_grid(doc_["experiment"].get<std::string>()));
        p["seed"] = o.seed;
        doc_["parameters"] = p;
        doc_["samples"] = json::array();
        doc_["verdict"] = json::object();
        doc_["provenance"] = std::move(provenance);
        doc_["pass"] = false;
    }

    json& parameters() { return doc_["parameters"]; }
    json& samples() { return doc_["samples"]; }
    json& verdict() { return doc_["verdict"]; }

    bool check(std::string name, bool pass, json value = nullptr, json threshold = nullptr) {
        checks_.push_back({std::move(name), pass, std::move(value), std::move(threshold)});
        return pass;
    }

    ExperimentReport finish() {
        bool pass = !checks_.empty();
        json cs = json::array();
        for (const auto& c : checks_) {
            pass = pass && c.pass;
            cs.push_back(report::to_json(c));
        }
        doc_["verdict"]["checks"] = cs;
        doc_["pass"] = pass;
        return {doc_, pass};
    }

private:
    json doc_;
    std::vector<Check> checks_;
};

inline bool rel_close(complex x, complex y, double tol) { return std::abs(x - y) <= tol * std::max(1.0, std::abs(y)); }

}  // namespace detail

/// Leaves of the Hopf model against the brute-force conjugacy solver.
inline ExperimentReport hopf_leaf(const RunOptions& o) {
    detail::Builder b("hopf-leaf", o, "Hopf surfaces: leaves of phi = (trace, discriminant) are isomorphism classes, "
                                      "except that the scalar point is alone in its fiber");
    const int pairs = o.grid.value_or(default_grid("hopf-leaf"));
    std::mt19937_64 rng(o.seed);
    hopf::PointSampler sampler(rng);

    int disagreements = 0, positives = 0;
    for (int i = 0; i < pairs; ++i) {
        hopf::HopfPoint a = sampler.on_leaf(sampler.leaf_value());
        hopf::HopfPoint c = a;
        switch (i % 5) {
            case 0: c = sampler.on_leaf(sampler.leaf_value()); break;
            case 1: {
                const auto v = sampler.leaf_value();
                a = sampler.on_leaf(v);
                c = sampler.on_leaf(v);
                break;
            }
            case 2: {
                const complex lam = sampler.dyadic_eigenvalue();
                a = sampler.jordan(lam);
                c = (i % 2) ? sampler.jordan(lam) : sampler.scalar(lam);
                break;
            }
            case 3: {
                const complex lam = sampler.dyadic_eigenvalue();
                a = sampler.scalar(lam);
                c = sampler.scalar(lam);
                break;
            }
            default: break;
        }
        const bool by_leaf = hopf::phi_close(hopf::phi(a), hopf::phi(c), o.tol) && hopf::stratum(a) == hopf::stratum(c);
        const bool by_solver = !solve_conjugacy(a.matrix(), c.matrix(), o.tol).empty;
        if (by_leaf != by_solver) ++disagreements;
        if (by_solver) ++positives;
    }
    b.check("leaf_vs_solver_disagreements", disagreements == 0, disagreements, 0);
    b.verdict()["random_pairs"] = pairs;
    b.verdict()["isomorphic_pairs"] = positives;

    // The (4, 0) fiber: 2 Id against Jordan points, and Jordan points among themselves.
    const hopf::HopfPoint two_id(Mat2::scalar(2.0));
    int scalar_hits = 0, jordan_misses = 0;
    for (int i = 0; i < 20; ++i) {
        const auto p = sampler.jordan(2.0), q = sampler.jordan(2.0);
        const bool with_scalar = hopf::same_hopf_surface(two_id, p, o.tol);
        const bool mates = hopf::same_hopf_surface(p, q, o.tol);
        scalar_hits += with_scalar;
        jordan_misses += !mates;
        json s;
        s["pair"] = i;
        s["jordan_offdiag_norm"] = frobenius_norm(p.matrix() - Mat2::scalar(2.0));
        s["same_as_scalar"] = with_scalar;
        s["same_as_other_jordan"] = mates;
        b.samples().push_back(s);
    }
    b.check("scalar_point_isolated", scalar_hits == 0, scalar_hits, 0);
    b.check("jordan_points_pairwise_same", jordan_misses == 0, jordan_misses, 0);
    return b.finish();
}

/// X1 = [[2+t, t], [0, 2+t]] against X2 = [[2+t, t^3], [0, 2+t]].
inline ExperimentReport hopf_counterexample(const RunOptions& o) {
    detail::Builder b("hopf-counterexample", o,
                      "Hopf families [[2+t, t], [0, 2+t]] and [[2+t, t^3], [0, 2+t]]: isomorphic fibers, "
                      "not locally isomorphic at 0");
    const auto x1 = family::hopf_linear_family(), x2 = family::hopf_cubic_family();
    const double fit_tol = 1e-9;
    json families = json::array();
    for (double t : {0.5, 0.1, 0.01}) {
        const auto sol = solve_conjugacy(x1.at(t), x2.at(t), ConjugacyOptions{o.tol, true});
        const auto& fam = sol.det1_family;
        const Mat2& k = fam.direction;
        bool shape = fam.kind == Det1Kind::lines && fam.branch_count() == 2 && std::abs(k[1]) > 0.0 &&
                     std::abs(k[0]) <= fit_tol && std::abs(k[2]) <= fit_tol && std::abs(k[3]) <= fit_tol;
        std::set<int> signs;
        json reps = json::array();
        for (std::size_t br = 0; shape && br < fam.branch_count(); ++br) {
            const Mat2& r = fam.representatives[br];
            // +-[[1/t, q], [0, t]]: the inverse-diagonal form of the witness.
            const int sign = r[0].real() > 0.0 ? 1 : -1;
            signs.insert(sign);
            shape = shape && std::abs(r[2]) <= fit_tol && detail::rel_close(r[0], sign / t, fit_tol) &&
                    detail::rel_close(r[3], sign * t, fit_tol);
            reps.push_back(report::to_json(r));
        }
        shape = shape && signs.size() == 2;
        const auto best = min_norm_member(fam);
        const double norm = best ? best->norm : 0.0;
        b.check("det1_family_shape(t=" + report::detail::number(t) + ")", shape);
        b.check("min_norm_witness(t=" + report::detail::number(t) + ")", norm >= 0.99 / std::abs(t), norm,
                0.99 / std::abs(t));
        json f;
        f["t"] = t;
        f["kind"] = to_string(fam.kind);
        f["representatives"] = reps;
        f["direction"] = report::to_json(k);
        f["min_norm"] = norm;
        families.push_back(f);
    }
    b.verdict()["witness_families"] = families;

    const auto sweep = family::pointwise_iso_sweep(x1, x2, {0.5, 0.1, -0.1, 0.01, -0.01, -0.45}, o.bound, o.tol);
    b.check("pointwise_sweep", sweep.pointwise == family::Tri::Yes);

    const auto v = family::local_iso_probe(x1, x2, family::dyadic_samples(o.grid.value_or(default_grid("hopf-counterexample"))), o.bound, o.tol);
    b.samples() = report::samples_json(v.trace);
    b.verdict()["probe"] = report::to_json(v);
    b.check("probe_verdict", v.locally_iso == family::Tri::No && v.diagnosis == "divergence",
            std::string(family::to_string(v.locally_iso)) + "/" + v.diagnosis, "No/divergence");
    return b.finish();
}

inline ExperimentReport hopf_transpose_lift(const RunOptions& o) {
    detail::Builder b("hopf-transpose-lift", o,
                      "Hopf surface of [[2, t], [0, 2]]: the transpose automorphism does not lift along t");
    const int count = o.grid.value_or(default_grid("hopf-transpose-lift"));
    std::vector<double> ts;
    for (int k = 1; k <= count; ++k) ts.push_back((k % 2 ? 1.0 : -1.0) * std::ldexp(1.0, -((k + 1) / 2)));
    try {
        const auto r = family::transpose_lift_check(ts, o.tol);
        for (const auto& s : r.samples) {
            json j;
            j["t"] = s.t;
            j["closed_form_distance"] = s.closed_form_distance;
            j["grid_distance"] = s.grid_distance;
            b.samples().push_back(j);
        }
        const auto& s0 = r.samples.front();
        json jordan, diagonal;
        jordan["kind"] = to_string(s0.jordan_family.kind);
        jordan["base"] = json::array();
        for (const auto& rep : s0.jordan_family.representatives) {
            const Mat2& k = s0.jordan_family.direction;
            jordan["base"].push_back(report::to_json(rep + (-rep[0] / k[0]) * k));
        }
        jordan["direction"] = report::to_json((1.0 / s0.jordan_family.direction[0]) * s0.jordan_family.direction);
        diagonal["kind"] = to_string(s0.diagonal_family.kind);
        diagonal["e1"] = report::to_json(s0.diagonal_family.e1);
        diagonal["e2"] = report::to_json(s0.diagonal_family.e2);
        b.verdict()["jordan_family"] = jordan;
        b.verdict()["diagonal_family"] = diagonal;
        b.verdict()["min_distance"] = r.min_distance;
        b.check("families_match_closed_form", true);
        b.check("set_distance", r.pass, r.min_distance, 1.0 - o.tol);
    } catch (const model_inconsistency& e) {
        b.verdict()["error"] = e.what();
        b.check("families_match_closed_form", false);
    }
    return b.finish();
}

inline ExperimentReport hopf_fg(const RunOptions& o) {
    detail::Builder b("hopf-fg", o,
                      "Hopf model: the leaf through 2 Id contains no non-constant path, while the jumping family "
                      "[[2, t], [0, 2]] is isotrivial off 0");
    const int count = std::max(3, o.grid.value_or(default_grid("hopf-fg")));
    std::vector<double> grid;
    for (int k = 0; k < count; ++k) grid.push_back(-0.5 + double(k) / (count - 1));
    const auto jumping = family::hopf_jumping_family();
    const auto constant = family::hopf_constant_family(Mat2::scalar(2.0));
    const auto rj = family::fischer_grauert_check(jumping, grid, o.tol);
    const auto rc = family::fischer_grauert_check(constant, grid, o.tol);
    const auto control =
        family::fischer_grauert_check(jumping, grid, o.tol, [](const Mat2&, const Mat2&) { return true; });
    for (double t : grid) {
        json s;
        s["t"] = t;
        s["same_as_fiber_at_0"] = hopf::same_hopf_surface(hopf::HopfPoint(jumping.at(t)), hopf::HopfPoint(jumping.at(0.0)), o.tol);
        s["stratum"] = hopf::to_string(hopf::stratum(hopf::HopfPoint(jumping.at(t))));
        b.samples().push_back(s);
    }
    // Off 0 every fiber of the jumping family is the Jordan surface.
    bool isotrivial = true;
    for (double t : grid)
        if (t != 0.0)
            isotrivial = isotrivial && hopf::same_hopf_surface(hopf::HopfPoint(jumping.at(t)), hopf::HopfPoint(Mat2{2.0, 1.0, 0.0, 2.0}), o.tol);
    b.check("jumping_family", rj.holds, rj.max_deviation);
    b.check("jumping_family_isotrivial_off_0", isotrivial);
    b.check("constant_family", rc.holds && rc.all_fibers_isomorphic);
    b.check("negative_control_detected", !control.holds);
    b.verdict()["jumping_all_fibers_isomorphic"] = rj.all_fibers_isomorphic;
    return b.finish();
}

/// Generic parameters for the automorphism check: away from the zeros of b, c.
template <class Rng>
double generic_parameter(Rng& rng, torus::Variant v) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double sign = u(rng) < 0.5 ? -1.0 : 1.0;
    if (v == torus::Variant::transpose_split) return sign * (0.25 + 0.65 * u(rng));
    const double s = (u(rng) < 0.5 ? 0.0 : 1.0) + 0.4 + 0.2 * u(rng);
    return sign * std::exp(-s);
}

inline ExperimentReport torus_counterexample(const RunOptions& o) {
    detail::Builder b("torus-counterexample", o,
                      "Complex tori with flat off-diagonal periods: pointwise isomorphic, not locally isomorphic, "
                      "constant h0");
    b.parameters()["variant"] = torus::to_string(o.variant);
    const auto p = torus::FlatFunctionParams::defaults(o.variant);
    b.parameters()["alpha"] = p.alpha;
    b.parameters()["beta"] = p.beta;

    const auto swap = torus::IntMat4::swap();
    b.check("swap_in_SL4Z", torus::IntMat4::determinant(swap.entries()) == 1);

    double worst = 0.0;
    int transposed = 0;
    for (double t : family::torus_probe_samples(o.variant)) {
        if (!torus::omega2_transposed(t, p)) continue;
        ++transposed;
        worst = std::max(worst, torus::act_residual(torus::omega1(t, p), swap, torus::omega2(t, p)));
    }
    b.check("swap_residual", transposed > 0 && worst <= 1e-12, worst, 1e-12);

    std::mt19937_64 rng(o.seed);
    const int generic = o.grid.value_or(default_grid("torus-counterexample"));
    std::vector<std::array<std::int64_t, 16>> expected{torus::IntMat4::identity().entries(),
                                                       (-torus::IntMat4::identity()).entries()};
    std::sort(expected.begin(), expected.end());
    json autos = json::array();
    bool generic_ok = true;
    for (int i = 0; i < generic; ++i) {
        const double t = generic_parameter(rng, o.variant);
        const auto found = torus::automorphisms(torus::omega1(t, p), o.bound, o.tol);
        std::vector<std::array<std::int64_t, 16>> got;
        for (const auto& g : found) got.push_back(g.entries());
        std::sort(got.begin(), got.end());
        generic_ok = generic_ok && got == expected;
        json a;
        a["t"] = t;
        a["automorphisms"] = found.size();
        autos.push_back(a);
    }
    b.verdict()["generic_automorphisms"] = autos;
    b.check("generic_automorphisms_are_plus_minus_id", generic_ok);

    const auto v = family::local_iso_probe(family::torus_omega1_family(p), family::torus_omega2_family(p),
                                           family::torus_probe_samples(o.variant), o.bound, o.tol);
    b.samples() = report::samples_json(v.trace);
    b.verdict()["probe"] = report::to_json(v);
    b.check("pointwise_sweep", v.pointwise_iso);
    b.check("probe_verdict", v.locally_iso == family::Tri::No && v.diagnosis == "class-jump",
            std::string(family::to_string(v.locally_iso)) + "/" + v.diagnosis, "No/class-jump");

    json flat = json::array();
    std::vector<double> zeros;
    if (o.variant == torus::Variant::transpose_split)
        zeros.push_back(0.0);
    else
        for (int n = 1; n <= 4; ++n) zeros.push_back(torus::flat_zero(n));
    double worst_flat = 0.0;
    for (double t : zeros) {
        const auto d = torus::flatness_defect(t, p);
        worst_flat = std::max(worst_flat, std::abs(d.value));
        json f;
        f["t"] = t;
        f["max_derivative"] = std::abs(d.value);
        f["error_estimate"] = d.error;
        flat.push_back(f);
    }
    b.verdict()["flatness"] = flat;
    b.check("flatness", worst_flat <= 1e-6, worst_flat, 1e-6);
    // h0 = 4 everywhere: the counterexample lives on a versal space with constant h0.
    b.check("h0_constant", family::model_summary(family::Model::Torus).h0_constant);
    return b.finish();
}

/// Pull-backs of the jumping family by z^n and z^m.
inline ExperimentReport jets_degree(const RunOptions& o) {
    detail::Builder b("jets-degree", o,
                      "Pull-backs of the jumping family by z^n and z^m are locally equivalent iff n = m");
    b.parameters()["n"] = o.n;
    b.parameters()["m"] = o.m;
    const auto jump = family::hopf_jumping_family();
    const auto fn = family::pullback_by_power(jump, o.n), fm = family::pullback_by_power(jump, o.m);
    const auto on = jet::vanishing_order(*fn.germ), om = jet::vanishing_order(*fm.germ);
    b.check("germ_orders", on == o.n && om == o.m, json::array({on.value_or(0), om.value_or(0)}),
            json::array({o.n, o.m}));
    const auto verdict = jet::type2_verdict(o.n, o.m);
    b.verdict()["type2_verdict"] = jet::to_string(verdict);

    std::vector<double> ts;
    for (int k = 1; k <= 6; ++k) ts.push_back(std::ldexp(1.0, -k));
    const auto v = family::local_equivalence_probe(fn, fm, std::max({o.n, o.m, 6}), ts, o.bound, o.tol);
    b.verdict()["probe"] = report::to_json(v);
    const bool expect_equivalent = verdict == jet::Type2Verdict::Equivalent;
    b.check("probe_agrees_with_degrees",
            v.locally_equivalent == (expect_equivalent ? family::Tri::Yes : family::Tri::No), v.diagnosis);

    // Order of a pull-back multiplies: 6 degrees x 2 orders x 3 random germs.
    std::mt19937_64 rng(o.seed);
    std::normal_distribution<double> d;
    int cases = 0, order_failures = 0;
    for (int n = 1; n <= 6; ++n)
        for (int ord = 1; ord <= 2; ++ord)
            for (int rep = 0; rep < 3; ++rep) {
                jet::Jet f(4);
                for (int i = 0; i < 4; ++i)
                    for (int k = ord; k <= f.order(); ++k) f(i, k) = {d(rng), d(rng)};
                ++cases;
                if (jet::vanishing_order(jet::compose(f, jet::Jet::monomial(n))) != n * ord) ++order_failures;
            }
    b.check("pullback_order_cases", cases == 36 && order_failures == 0, order_failures, 0);

    // Round trip f(u(z)) = z^n on convergent germs z^n g(z), |g_k| <= 2^-k.
    const int trials = o.grid.value_or(default_grid("jets-degree"));
    std::uniform_real_distribution<double> mod(0.5, 1.5), unit(-1.0, 1.0), arg(0.0, 2.0 * std::numbers::pi);
    std::uniform_int_distribution<int> deg(1, 5);
    double worst = 0.0;
    for (int i = 0; i < trials; ++i) {
        const int n = deg(rng);
        jet::Jet f(1);
        f(0, n) = std::polar(mod(rng), arg(rng));
        for (int k = n + 1; k <= f.order(); ++k)
            f(0, k) = std::ldexp(1.0, n - k) * complex{unit(rng), unit(rng)} / std::sqrt(2.0);
        const auto nf = jet::normalize_covering(f);
        const double r = (jet::compose(f, nf.u) - jet::Jet::monomial(n)).max_norm();
        worst = std::max(worst, r);
        json s;
        s["degree"] = n;
        s["recovered_degree"] = nf.degree;
        s["residual"] = r;
        b.samples().push_back(s);
        if (nf.degree != n) worst = std::numeric_limits<double>::infinity();
    }
    b.check("normalize_covering_round_trip", worst <= 1e-9, worst, 1e-9);
    return b.finish();
}

inline ExperimentReport lemma7_density(const RunOptions& o) {
    detail::Builder b("lemma7-density", o,
                      "Density of exp(2 pi i l (m/n)^k) on the unit circle, n = 3, m = 2");
    const int range = o.grid.value_or(default_grid("lemma7-density"));
    b.parameters()["n"] = 3;
    b.parameters()["m"] = 2;
    b.parameters()["depth"] = 8;
    const double gap = jet::density_gap(3, 2, 8, range);
    b.verdict()["max_gap"] = gap;
    b.check("max_gap(K=8)", gap < 0.01, gap, 0.01);

    const std::vector<int> depths{1, 2, 4, 8};
    const std::vector<int> ranges{10, 25, 50, 200};
    std::vector<std::vector<double>> table(depths.size(), std::vector<double>(ranges.size()));
    for (std::size_t i = 0; i < depths.size(); ++i)
        for (std::size_t j = 0; j < ranges.size(); ++j) {
            table[i][j] = jet::density_gap(3, 2, depths[i], ranges[j]);
            json s;
            s["depth"] = depths[i];
            s["range"] = ranges[j];
            s["max_gap"] = table[i][j];
            b.samples().push_back(s);
        }
    bool monotone = true;
    for (std::size_t i = 0; i < depths.size(); ++i)
        for (std::size_t j = 0; j < ranges.size(); ++j) {
            if (i + 1 < depths.size()) monotone = monotone && table[i + 1][j] <= table[i][j];
            if (j + 1 < ranges.size()) monotone = monotone && table[i][j + 1] <= table[i][j];
        }
    b.check("monotone_in_depth_and_range", monotone);
    return b.finish();
}

inline ExperimentReport stratify(const RunOptions& o) {
    detail::Builder b("stratify", o, "Stratification by dim K(t), foliation by isomorphism classes, and constancy of h0");
    b.parameters()["model"] = family::to_string(o.model);
    family::ModelSummary summary;
    try {
        summary = family::model_summary(o.model);
    } catch (const model_inconsistency& e) {
        b.verdict()["error"] = e.what();
        b.check("model_summary", false);
        return b.finish();
    }
    b.verdict()["summary"] = report::to_json(summary);
    b.check("foliation_trivial_iff_h0_constant", summary.foliation_trivial == summary.h0_constant);
    for (const auto& m : family::all_models()) {
        const auto s = family::model_summary(m);
        b.check(std::string("equivalence_") + family::to_string(m), s.foliation_trivial == s.h0_constant);
    }

    if (o.model == family::Model::Hopf) {
        // {t : h0(t) = h0(0)} against the stratum of minimal leaf dimension, with h0
        // counted as the dimension of the centralizer of the matrix.
        const int points = o.grid.value_or(default_grid("stratify"));
        std::mt19937_64 rng(o.seed);
        hopf::PointSampler sampler(rng);
        const auto centralizer = [&](const Mat2& a) { return int(solve_conjugacy(a, a, o.tol).basis.size()); };
        const int base = centralizer(Mat2::scalar(2.0));
        int violations = 0;
        for (int i = 0; i < points; ++i) {
            const hopf::HopfPoint p = (i % 3 == 0)   ? sampler.scalar(sampler.dyadic_eigenvalue())
                                      : (i % 3 == 1) ? sampler.jordan(sampler.dyadic_eigenvalue())
                                                     : sampler.on_leaf(sampler.leaf_value());
            const int h = centralizer(p.matrix());
            const bool maximal = hopf::leaf_of(p, o.tol).leaf_dim == 0;
            if ((h == base) != maximal || h != hopf::h0(p)) ++violations;
            if (i < 30) {
                json s;
                s["point"] = i;
                s["h0"] = h;
                s["stratum"] = hopf::to_string(hopf::stratum(p));
                s["leaf_dim"] = hopf::leaf_of(p, o.tol).leaf_dim;
                b.samples().push_back(s);
            }
        }
        b.verdict()["sampled_points"] = points;
        b.check("h0_level_set_is_maximal_stratum", violations == 0, violations, 0);

        // Upper semicontinuity: h0 only jumps up at the scalar end of (1 - s) A + s B.
        int jumps = 0;
        for (int i = 0; i < 50; ++i) {
            const complex lam = sampler.dyadic_eigenvalue();
            const Mat2 a = Mat2::scalar(lam), c = sampler.jordan(lam).matrix();
            for (double s : {1e-3, 0.25, 1.0})
                if (centralizer((1.0 - s) * a + complex(s) * c) > base) ++jumps;
        }
        b.check("h0_upper_semicontinuous", jumps == 0, jumps, 0);
    }
    return b.finish();
}

/// Dispatch by id; unknown ids raise invalid_argument listing the valid ones.
inline ExperimentReport run(const std::string& id, const RunOptions& o) {
    static const std::map<std::string, std::function<ExperimentReport(const RunOptions&)>> table{
        {"hopf-leaf", hopf_leaf},
        {"hopf-counterexample", hopf_counterexample},
        {"hopf-transpose-lift", hopf_transpose_lift},
        {"hopf-fg", hopf_fg},
        {"torus-counterexample", torus_counterexample},
        {"jets-degree", jets_degree},
        {"lemma7-density", lemma7_density},
        {"stratify", stratify},
    };
    const auto it = table.find(id);
    if (it == table.end()) {
        std::string valid;
        for (const auto& x : experiment_ids()) valid += (valid.empty() ? "" : ", ") + x;
        throw std::invalid_argument("unknown experiment '" + id + "'; valid: " + valid);
    }
    if (!(o.tol > 0.0)) throw std::invalid_argument("--tol must be positive");
    if (o.bound < 1 || o.bound > torus::max_search_bound)
        throw std::invalid_argument("--bound must be in 1.." + std::to_string(torus::max_search_bound));
    if (o.grid && *o.grid < 1) throw std::invalid_argument("--grid must be positive");
    if (o.n < 1 || o.m < 1) throw std::invalid_argument("--n and --m must be positive");
    return it->second(o);
}

}  // namespace moduli_lab::experiments
