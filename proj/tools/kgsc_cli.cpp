// Command line front end: fixture generation, embedding training, experiment
// sweeps, and CSV reports.

#include <cstdio>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kgsc/experiment.hpp"
#include "kgsc/fixture.hpp"

namespace {

int cmd_fixture(const std::string& out_dir, const kgsc::FixtureSpec& spec, std::uint64_t seed) {
    const auto files = kgsc::generate_toy_fixture(spec, seed, out_dir);
    std::cout << "kg        " << files.kg << "\n"
              << "heldout   " << files.heldout << "\n"
              << "corpus    " << files.corpus << "\n"
              << "templates " << files.templates << "\n"
              << "synonyms  " << files.synonyms << "\n";
    for (std::size_t u = 0; u < files.private_kgs.size(); ++u)
        std::cout << "user" << u << "     " << files.private_kgs[u] << "\n";
    return 0;
}

int cmd_train(const std::string& config_path, std::uint64_t* seed_override) {
    auto cfg = kgsc::load_train_config_file(config_path);
    if (seed_override) cfg.train.seed = *seed_override;
    const auto kg = kgsc::KnowledgeGraph::load_file(cfg.kg_path);
    std::cout << "training on " << kg.size() << " triplets, |E|=" << kg.n_entities()
              << " |R|=" << kg.n_relations() << ", d=" << cfg.train.dimension << ", steps=" << cfg.train.steps
              << "\n";
    kgsc::Rng rng(cfg.train.seed);
    std::vector<double> losses;
    const auto model = kgsc::train(kg, cfg.train, rng, &losses);
    model.save_file(cfg.model_out);
    if (!losses.empty())
        std::cout << "loss " << kgsc::format_number(losses.front()) << " -> " << kgsc::format_number(losses.back())
                  << "\n";
    kgsc::Rng margin_rng(cfg.train.seed + 1);
    std::cout << "positive/negative score margin " << kgsc::format_number(kgsc::score_margin(model, kg, margin_rng))
              << "\n"
              << "checkpoint written to " << cfg.model_out << "\n";
    return 0;
}

int cmd_run(const std::string& config_path, std::uint64_t* seed_override, bool no_correction,
            const std::string& out_override, std::size_t parallel_override) {
    auto cfg = kgsc::load_experiment_config_file(config_path);
    if (seed_override) cfg.seed = *seed_override;
    if (no_correction) cfg.correction = false;
    if (!out_override.empty()) cfg.out_path = out_override;
    if (parallel_override) cfg.parallel = parallel_override;

    std::vector<kgsc::ServiceWarning> warnings;
    const auto rows = kgsc::run(cfg, &warnings);
    std::cout << kgsc::to_csv(rows);
    for (const auto& w : warnings) std::cerr << "warning: service " << w.endpoint << ": " << w.message << "\n";
    if (!warnings.empty())
        std::cerr << "warning: " << warnings.size() << " service call(s) fell back to built-in metrics\n";
    return 0;
}

int cmd_report(const std::string& config_path, const std::string& csv_path) {
    std::string path = csv_path;
    if (path.empty()) {
        const auto cfg = kgsc::load_experiment_config_file(config_path);
        if (cfg.out_path.empty()) throw std::runtime_error("config has no 'out' path; pass --in");
        path = cfg.out_path;
    }
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (cells.size() < 10) continue;
        if (header) {
            std::printf("%-24s %10s %8s %10s %10s %10s %14s %12s %13s\n", "pipeline", "sweep", "trials", "sim",
                        "bleu", "ter", "bits_semantic", "bits_fixed7", "bits_huffman");
            header = false;
            continue;
        }
        std::printf("%-24s %10s %8s %10s %10s %10s %14s %12s %13s\n", cells[0].c_str(), cells[1].c_str(),
                    cells[2].c_str(), cells[3].c_str(), cells[4].c_str(), cells[5].c_str(), cells[6].c_str(),
                    cells[7].c_str(), cells[8].c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"knowledge-graph semantic communication simulator"};
    app.require_subcommand(1);

    // fixture
    auto* fixture = app.add_subcommand("fixture", "generate a toy dataset");
    std::string fixture_out = "fixture";
    kgsc::FixtureSpec spec;
    std::uint64_t fixture_seed = 0;
    fixture->add_option("--out", fixture_out, "output directory");
    fixture->add_option("--entities", spec.entities, "entity count");
    fixture->add_option("--relations", spec.relations, "relation count");
    fixture->add_option("--triplets", spec.triplets, "training triplet count");
    fixture->add_option("--heldout", spec.heldout, "held-out triplet count");
    fixture->add_option("--users", spec.users, "private split count");
    fixture->add_option("--seed", fixture_seed, "generator seed");

    // train-embeddings
    auto* train_cmd = app.add_subcommand("train-embeddings", "train the embedding model");
    std::string train_config;
    std::uint64_t train_seed = 0;
    train_cmd->add_option("--config", train_config, "training config file")->required();
    auto* train_seed_opt = train_cmd->add_option("--seed", train_seed, "override config seed");

    // run
    auto* run_cmd = app.add_subcommand("run", "run an experiment sweep");
    std::string run_config, run_out;
    std::uint64_t run_seed = 0;
    bool no_correction = false;
    std::size_t parallel = 0;
    run_cmd->add_option("--config", run_config, "experiment config file")->required();
    auto* run_seed_opt = run_cmd->add_option("--seed", run_seed, "override config seed");
    run_cmd->add_flag("--no-correction", no_correction, "disable the semantic correction stage");
    run_cmd->add_option("--out", run_out, "override CSV output path");
    run_cmd->add_option("--parallel", parallel, "worker threads for trials");

    // report
    auto* report = app.add_subcommand("report", "pretty-print a results CSV");
    std::string report_config, report_in;
    report->add_option("--config", report_config, "experiment config (locates its CSV)");
    report->add_option("--in", report_in, "CSV path (overrides --config)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (fixture->parsed()) return cmd_fixture(fixture_out, spec, fixture_seed);
        if (train_cmd->parsed()) return cmd_train(train_config, train_seed_opt->count() ? &train_seed : nullptr);
        if (run_cmd->parsed())
            return cmd_run(run_config, run_seed_opt->count() ? &run_seed : nullptr, no_correction, run_out, parallel);
        if (report->parsed()) {
            if (report_config.empty() && report_in.empty())
                throw std::runtime_error("report needs --config or --in");
            return cmd_report(report_config, report_in);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
