// Runs acceptance criteria 1-8 and prints one PASS/FAIL line per criterion.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "moduli_lab/experiments.hpp"
#include "moduli_lab/report.hpp"

using namespace moduli_lab;
using experiments::RunOptions;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

/// Names and values of the failed checks of a report, or "all checks held".
std::string failures(const report::ExperimentReport& r) {
    std::string out;
    for (const auto& c : r.document["verdict"]["checks"]) {
        if (c["pass"].get<bool>()) continue;
        out += (out.empty() ? "" : "; ") + c["name"].get<std::string>();
        if (c.contains("value")) out += " = " + report::detail::cell(c["value"]);
        if (c.contains("threshold")) out += " (needs " + report::detail::cell(c["threshold"]) + ")";
    }
    return out.empty() ? "all checks held" : out;
}

Outcome from_reports(const std::vector<report::ExperimentReport>& rs) {
    Outcome o{true, ""};
    for (const auto& r : rs) {
        o.pass = o.pass && r.pass;
        o.detail += (o.detail.empty() ? "" : " | ") + r.document["experiment"].get<std::string>() + ": " + failures(r);
    }
    return o;
}

RunOptions with(std::function<void(RunOptions&)> f) {
    RunOptions o;
    f(o);
    return o;
}

/// Every experiment and variant with the options used by the criteria.
std::vector<std::pair<std::string, RunOptions>> all_runs() {
    std::vector<std::pair<std::string, RunOptions>> runs;
    for (const auto& id : experiments::experiment_ids()) runs.emplace_back(id, RunOptions{});
    runs.emplace_back("torus-counterexample", with([](RunOptions& o) { o.variant = torus::Variant::interval_alternating; }));
    runs.emplace_back("jets-degree", with([](RunOptions& o) { o.m = 2; }));
    runs.emplace_back("stratify", with([](RunOptions& o) { o.model = family::Model::Torus; }));
    runs.emplace_back("stratify", with([](RunOptions& o) { o.model = family::Model::HirzebruchF2; }));
    return runs;
}

}  // namespace

int main() {
    struct Criterion {
        int number;
        std::string name;
        double budget_seconds;
        std::function<Outcome()> body;
    };
    const std::vector<Criterion> criteria{
        {1, "Hopf counterexample: witness family, divergence, pointwise sweep", 5.0,
         [] { return from_reports({experiments::run("hopf-counterexample", {})}); }},
        {2, "transpose does not lift: families and set distance >= 1", 1.0,
         [] { return from_reports({experiments::run("hopf-transpose-lift", {})}); }},
        {3, "Hopf leaves agree with the conjugacy solver", 5.0,
         [] { return from_reports({experiments::run("hopf-leaf", {})}); }},
        {4, "jets: pull-back orders, covering round trip, degree verdict", 2.0,
         [] { return from_reports({experiments::run("jets-degree", {})}); }},
        {5, "density gap(3, 2, K=8, L=200) < 0.01 and monotonicity", 2.0,
         [] { return from_reports({experiments::run("lemma7-density", {})}); }},
        {6, "torus counterexample, both variants", 60.0,
         [] {
             return from_reports(
                 {experiments::run("torus-counterexample", {}),
                  experiments::run("torus-counterexample",
                                   with([](RunOptions& o) { o.variant = torus::Variant::interval_alternating; }))});
         }},
        {7, "foliation trivial iff h0 constant; Hopf h0 level set on 500 points", 5.0,
         [] { return from_reports({experiments::run("stratify", {})}); }},
        {8, "byte-identical reports for a fixed seed", 120.0,
         [] {
             Outcome o{true, ""};
             int runs = 0;
             for (const auto& [id, opts] : all_runs()) {
                 for (auto format : {report::Format::structured, report::Format::table}) {
                     const auto a = report::render(experiments::run(id, opts), format);
                     const auto b = report::render(experiments::run(id, opts), format);
                     ++runs;
                     if (a != b) {
                         o.pass = false;
                         o.detail += id + " differs; ";
                     }
                 }
             }
             if (o.pass) o.detail = std::to_string(runs) + " report pairs identical";
             return o;
         }},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.body();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (seconds > c.budget_seconds) {
            o.pass = false;
            o.detail += "; runtime over budget";
        }
        failed += !o.pass;
        std::printf("criterion %d: %s  %s [%.3f s / %.0f s] %s\n", c.number, o.pass ? "PASS" : "FAIL", c.name.c_str(),
                    seconds, c.budget_seconds, o.detail.c_str());
    }
    std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
