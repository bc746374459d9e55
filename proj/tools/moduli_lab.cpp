#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "moduli_lab/experiments.hpp"
#include "moduli_lab/report.hpp"

using namespace moduli_lab;

int main(int argc, char** argv) {
    CLI::App app{"Deformation families of Hopf surfaces and complex tori: experiment runner", "moduli-lab"};
    app.require_subcommand(1);
    auto* run = app.add_subcommand("run", "Run one experiment and emit its report");

    experiments::RunOptions opts;
    std::string id;
    std::optional<double> tol;
    std::optional<int> grid, n, m;
    std::optional<std::string> variant, model;
    std::string out;
    std::string format = "structured";

    run->add_option("experiment", id, "Experiment id")
        ->required()
        ->check(CLI::IsMember(experiments::experiment_ids()));
    run->add_option("--tol", tol, "Numerical tolerance (default 1e-9)")->check(CLI::PositiveNumber);
    run->add_option("--bound", opts.bound, "SL4(Z) search bound")
        ->check(CLI::Range(1, torus::max_search_bound))
        ->capture_default_str();
    run->add_option("--grid", grid, "Sample count; meaning depends on the experiment")->check(CLI::PositiveNumber);
    run->add_option("--seed", opts.seed, "RNG seed")->envname("MODULI_LAB_SEED")->capture_default_str();
    run->add_option("--out", out, "Write the report to PATH instead of stdout");
    run->add_option("--format", format, "Report format")
        ->check(CLI::IsMember({"structured", "table"}))
        ->capture_default_str();
    run->add_option("--variant", variant, "torus-counterexample variant")
        ->check(CLI::IsMember({"transpose_split", "interval_alternating"}));
    run->add_option("--n", n, "jets-degree: first covering degree")->check(CLI::Range(1, 12));
    run->add_option("--m", m, "jets-degree: second covering degree")->check(CLI::Range(1, 12));
    run->add_option("--model", model, "stratify: model")->check(CLI::IsMember({"hopf", "torus", "hirzebruch_f2"}));

    try {
        app.parse(argc, argv);
        if (variant && id != "torus-counterexample")
            throw CLI::ValidationError("--variant", "only valid for torus-counterexample");
        if ((n || m) && id != "jets-degree") throw CLI::ValidationError("--n/--m", "only valid for jets-degree");
        if (model && id != "stratify") throw CLI::ValidationError("--model", "only valid for stratify");
    } catch (const CLI::ParseError& e) {
        // Help exits 0; every usage error exits 2.
        return app.exit(e) == 0 ? 0 : 2;
    }

    if (tol) opts.tol = *tol;
    opts.grid = grid;
    if (variant)
        opts.variant = *variant == "transpose_split" ? torus::Variant::transpose_split : torus::Variant::interval_alternating;
    if (n) opts.n = *n;
    if (m) opts.m = *m;
    if (model) {
        static const std::map<std::string, family::Model> models{
            {"hopf", family::Model::Hopf}, {"torus", family::Model::Torus}, {"hirzebruch_f2", family::Model::HirzebruchF2}};
        opts.model = models.at(*model);
    }

    report::ExperimentReport r;
    try {
        r = experiments::run(id, opts);
    } catch (const std::invalid_argument& e) {
        std::cerr << "moduli-lab: " << e.what() << "\n";
        return 2;
    }
    const std::string text =
        report::render(r, format == "table" ? report::Format::table : report::Format::structured);
    if (out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out, std::ios::binary);
        if (!f) {
            std::cerr << "moduli-lab: cannot write " << out << "\n";
            return 2;
        }
        f << text;
    }
    return r.pass ? 0 : 1;
}
