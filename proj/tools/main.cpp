#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "calcrad/config.hpp"
#include "calcrad/error.hpp"
#include "calcrad/phantom.hpp"
#include "calcrad/pipeline.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitDegenerate = 4;

int exit_code_for(calcrad::ErrorCode code) {
    using calcrad::ErrorCode;
    switch (code) {
        case ErrorCode::ConfigError: return kExitConfig;
        case ErrorCode::EmptyCohort:
        case ErrorCode::SingleClass:
        case ErrorCode::TooFewPerClass: return kExitDegenerate;
        default: return kExitData;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"calcrad: coronary calcium radiomics pipeline"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", mode, composition;
    std::optional<std::uint64_t> seed;

    auto* extract = app.add_subcommand("extract", "Extract the feature table for a manifest");
    extract->add_option("--config", config_path, "Run configuration file")->required()->check(CLI::ExistingFile);
    extract->add_option("--out", out_dir, "Output directory");
    extract->add_option("--seed", seed, "Master seed");

    auto* train = app.add_subcommand("train-eval", "Train, tune and evaluate classifiers");
    train->add_option("--config", config_path, "Run configuration file")->required()->check(CLI::ExistingFile);
    train->add_option("--out", out_dir, "Output directory");
    train->add_option("--seed", seed, "Master seed");
    train->add_option("--mode", mode, "radiomics|embeddings")->check(CLI::IsMember({"radiomics", "embeddings"}));
    train->add_option("--train-composition", composition, "mixed|noncontrast")
        ->check(CLI::IsMember({"mixed", "noncontrast"}));

    calcrad::phantom::PhantomOptions ph;
    auto* phantom = app.add_subcommand("phantom", "Generate a synthetic cohort");
    phantom->add_option("--out", out_dir, "Output directory")->required();
    phantom->add_option("--seed", ph.seed, "Master seed");
    phantom->add_option("--subjects", ph.n_subjects, "Number of subjects")->check(CLI::Range(2, 100000));
    phantom->add_option("--balance", ph.class_balance, "Fraction of NonZero subjects")->check(CLI::Range(0.0, 1.0));

    std::string report_a, report_b;
    auto* stats = app.add_subcommand("stats", "Paired t-tests between two run reports");
    stats->add_option("report_a", report_a, "First report.json")->required()->check(CLI::ExistingFile);
    stats->add_option("report_b", report_b, "Second report.json")->required()->check(CLI::ExistingFile);
    std::string stats_out;
    stats->add_option("--out", stats_out, "Write the comparison as JSON to this file");

    auto* catalog = app.add_subcommand("catalog", "Print the feature schema");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (*catalog) {
            std::cout << calcrad::pipeline::catalog_csv();
        } else if (*phantom) {
            const auto manifest = calcrad::phantom::generate(ph, out_dir);
            std::cout << "wrote " << manifest.entries.size() << " subjects to " << out_dir << "\n";
        } else if (*stats) {
            const auto result = calcrad::pipeline::cmd_stats(calcrad::pipeline::load_json(report_a),
                                                             calcrad::pipeline::load_json(report_b));
            if (!stats_out.empty()) calcrad::pipeline::write_text(stats_out, result.dump(2) + "\n");
            std::cout << calcrad::pipeline::format_stats(result);
        } else {
            calcrad::RunConfig cfg = calcrad::load_config(config_path);
            if (seed) cfg.seed = *seed;
            if (*extract) {
                const auto r = calcrad::pipeline::cmd_extract(cfg, out_dir);
                std::cout << "extracted " << r.table.subject_ids.size() << " subjects, excluded " << r.excluded.size()
                          << "\n";
                for (const auto& e : r.excluded) std::cerr << "excluded " << e.subject_id << ": " << e.reason << "\n";
            } else {
                if (!mode.empty()) cfg.mode = calcrad::run_mode_from_string(mode);
                if (!composition.empty()) cfg.composition = calcrad::composition_from_string(composition);
                const auto report = calcrad::pipeline::cmd_train_eval(cfg, out_dir);
                std::cout << calcrad::pipeline::metrics_csv(report);
            }
        }
    } catch (const calcrad::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return 0;
}
