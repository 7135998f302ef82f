#include "calcrad/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <sstream>

#include "calcrad/csv.hpp"
#include "calcrad/embeddings.hpp"
#include "calcrad/error.hpp"
#include "calcrad/eval.hpp"
#include "calcrad/features.hpp"
#include "calcrad/manifest.hpp"
#include "calcrad/nifti.hpp"
#include "calcrad/rng.hpp"
#include "calcrad/selection.hpp"

namespace calcrad::pipeline {

using nlohmann::json;

namespace {

std::uint64_t name_stream(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json exclusions_json(const std::vector<Exclusion>& ex) {
    json out = json::array();
    for (const auto& e : ex) out.push_back({{"subject_id", e.subject_id}, {"reason", e.reason}});
    return out;
}

std::string format_metric(const json& v) { return v.is_null() ? "—" : csv::format_double(v.get<double>()); }

}  // namespace

ExtractResult extract_cohort(const RunConfig& config) {
    if (config.manifest.empty()) throw Error(ErrorCode::ConfigError, "manifest is not set");
    CohortManifest manifest = load_manifest(config.manifest);
    std::sort(manifest.entries.begin(), manifest.entries.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) { return a.subject_id < b.subject_id; });

    ExtractResult r;
    r.table.feature_names = features::feature_names();
    std::vector<std::vector<double>> rows;
    for (const auto& e : manifest.entries) {
        try {
            const Volume3D vol = nifti::read(e.volume_path);
            const MaskVolume mask = nifti::read_mask(e.mask_path);
            const auto fv = features::extract_all(vol, mask, config.extraction);
            rows.push_back(fv.values);
            r.table.subject_ids.push_back(e.subject_id);
            r.table.labels.push_back(e.cac_label);
            r.table.groups.push_back(e.contrast);
        } catch (const Error& err) {
            r.excluded.push_back({e.subject_id, err.what()});
        }
    }
    if (rows.empty()) throw Error(ErrorCode::EmptyCohort, "no subject could be extracted");
    r.table.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(features::kFeatureCount));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) r.table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    return r;
}

ExtractResult cmd_extract(const RunConfig& config, const std::filesystem::path& out_dir) {
    ExtractResult r = extract_cohort(config);
    std::filesystem::create_directories(out_dir);
    write_feature_csv(r.table, out_dir / "features.csv");
    const json report = {{"extracted", r.table.subject_ids.size()}, {"excluded", exclusions_json(r.excluded)}};
    write_text(out_dir / "extraction_report.json", report.dump(2) + "\n");
    return r;
}

Cohort load_cohort(const RunConfig& config) {
    if (config.manifest.empty()) throw Error(ErrorCode::ConfigError, "manifest is not set");
    const CohortManifest manifest = load_manifest(config.manifest);
    Cohort c;
    std::vector<std::string> missing;
    if (config.mode == RunMode::Radiomics) {
        if (config.features.empty()) throw Error(ErrorCode::ConfigError, "features is not set");
        c.table = join_manifest(read_feature_csv(config.features), manifest, &missing);
        c.provenance = "radiomics-" + std::to_string(c.table.feature_names.size());
        // Reasons recorded at extraction time, when available.
        std::map<std::string, std::string> reasons;
        const auto report_path = config.features.parent_path() / "extraction_report.json";
        if (std::filesystem::exists(report_path)) {
            const json rep = load_json(report_path);
            for (const auto& e : rep.value("excluded", json::array())) {
                reasons[e.at("subject_id").get<std::string>()] = e.at("reason").get<std::string>();
            }
        }
        for (const auto& id : missing) {
            const auto it = reasons.find(id);
            c.excluded.push_back({id, it != reasons.end() ? it->second : "no row in feature table"});
        }
    } else {
        if (config.embeddings.empty()) throw Error(ErrorCode::ConfigError, "embeddings is not set");
        const auto emb = embeddings::load_embeddings(config.embeddings, config.embedding_provenance);
        auto joined = embeddings::join(emb, manifest);
        c.table = std::move(joined.table);
        c.provenance = emb.provenance;
        for (const auto& id : joined.missing) c.excluded.push_back({id, "no row in embedding table"});
    }
    if (c.table.rows() == 0) throw Error(ErrorCode::EmptyCohort, "no manifest subject has features");
    return c;
}

std::uint64_t run_seed(std::uint64_t master, int index) { return derive_seed(master, 0x52554E00ULL + static_cast<std::uint64_t>(index)); }

json run_once(const RunConfig& config, const FeatureTable& table, std::uint64_t seed) {
    const auto split = learn::stratified_split(table, config.test_fraction, derive_seed(seed, 1), ContrastGroup::NonContrast);
    std::vector<Eigen::Index> train_rows;
    for (const auto r : split.train) {
        if (config.composition == TrainComposition::Mixed || table.groups[static_cast<std::size_t>(r)] == ContrastGroup::NonContrast) {
            train_rows.push_back(r);
        }
    }
    if (split.test.empty()) throw Error(ErrorCode::EmptyCohort, "test split is empty");
    FeatureTable train = table.select_rows(train_rows);
    const FeatureTable test = table.select_rows(split.test);
    if (config.shuffle_labels) {
        Rng rng(derive_seed(seed, 2));
        rng.shuffle(train.labels);
    }

    const bool filter = config.mode == RunMode::Radiomics || config.embedding_selection;
    const std::vector<std::string> kept =
        filter ? selection::correlation_filter(train, config.selection_threshold) : train.feature_names;
    if (kept.empty()) throw Error(ErrorCode::DegenerateMatrix, "no feature survives selection");
    const auto standardizer = selection::fit_standardizer(train, kept);
    const FeatureTable train_z = standardizer.apply(train);
    const FeatureTable test_z = standardizer.apply(test);

    const learn::Dataset data{train_z.values, train_z.label_vector(), kept};
    const std::vector<int> truth = test_z.label_vector();

    json run;
    run["seed"] = seed;
    run["train_subjects"] = train.subject_ids;
    run["test_subjects"] = test.subject_ids;
    run["kept_features"] = kept;
    run["standardizer"] = {{"columns", standardizer.columns}, {"mean", standardizer.mean}, {"sd", standardizer.sd}};
    run["models"] = json::array();
    for (const auto& name : config.models) {
        const auto kind = learn::model_kind_from_string(name);
        const auto grid = config.grid_for(name);
        const auto result = learn::grid_search_cv(kind, data, grid, config.cv_folds, derive_seed(seed, name_stream(name)));
        const auto preds = learn::predict(result.model, test_z.values, kept);
        std::vector<int> predicted;
        json scores = json::array();
        for (const auto& p : preds) {
            predicted.push_back(p.label == CacLabel::NonZero ? 1 : 0);
            scores.push_back(p.score);
        }
        const auto counts = eval::confusion(truth, predicted);
        const auto m = eval::metrics(counts);
        json cv = json::array();
        for (std::size_t i = 0; i < result.points.size(); ++i) {
            cv.push_back({{"hyperparameters", result.points[i]}, {"score", optional_json(result.cv_scores[i])}});
        }
        run["models"].push_back({
            {"model", name},
            {"kind", learn::to_string(kind)},
            {"best_hyperparameters", result.best},
            {"cv", cv},
            {"test_scores", scores},
            {"confusion", {{"tp", counts.tp}, {"fn", counts.fn}, {"fp", counts.fp}, {"tn", counts.tn}}},
            {"metrics",
             {{"accuracy", optional_json(m.accuracy)},
              {"balanced_accuracy", optional_json(m.balanced_accuracy)},
              {"sensitivity", optional_json(m.sensitivity)},
              {"specificity", optional_json(m.specificity)},
              {"ppv", optional_json(m.ppv)},
              {"f1", optional_json(m.f1)},
              {"npv", optional_json(m.npv)}}},
            {"fingerprint", result.model.fingerprint()},
        });
    }
    return run;
}

json train_eval(const RunConfig& config, const Cohort& cohort) {
    json report;
    report["config"] = config.text;
    report["mode"] = to_string(config.mode);
    report["train_composition"] = to_string(config.composition);
    report["provenance"] = cohort.provenance;
    report["master_seed"] = config.seed;
    report["subjects"] = cohort.table.subject_ids.size();
    report["excluded"] = exclusions_json(cohort.excluded);
    report["runs"] = json::array();
    for (int i = 0; i < config.n_seeds; ++i) report["runs"].push_back(run_once(config, cohort.table, run_seed(config.seed, i)));
    return report;
}

json cmd_train_eval(const RunConfig& config, const std::filesystem::path& out_dir) {
    const auto start = std::chrono::steady_clock::now();
    const Cohort cohort = load_cohort(config);
    json report = train_eval(config, cohort);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report["timing"] = {{"seconds", seconds}};
    std::filesystem::create_directories(out_dir);
    write_text(out_dir / "report.json", report.dump(2) + "\n");
    write_text(out_dir / "metrics.csv", metrics_csv(report));
    return report;
}

std::string metrics_csv(const json& report) {
    static const char* const cols[] = {"accuracy", "balanced_accuracy", "sensitivity", "specificity", "ppv", "f1", "npv"};
    std::ostringstream out;
    out << "model,seed";
    for (const char* c : cols) out << ',' << c;
    out << '\n';
    for (const auto& run : report.at("runs")) {
        for (const auto& m : run.at("models")) {
            out << csv::quote(m.at("model").get<std::string>()) << ',' << run.at("seed").get<std::uint64_t>();
            for (const char* c : cols) out << ',' << format_metric(m.at("metrics").at(c));
            out << '\n';
        }
    }
    return out.str();
}

namespace {

std::vector<double> per_seed(const json& report, const std::string& model, const char* metric) {
    std::vector<double> out;
    for (const auto& run : report.at("runs")) {
        for (const auto& m : run.at("models")) {
            if (m.at("model") != model) continue;
            const auto& v = m.at("metrics").at(metric);
            // An undefined F1 (no positive predictions and no positives) counts as 0.
            out.push_back(v.is_null() ? 0.0 : v.get<double>());
        }
    }
    return out;
}

std::vector<std::string> model_names(const json& report) {
    std::vector<std::string> names;
    if (report.at("runs").empty()) return names;
    for (const auto& m : report.at("runs").front().at("models")) names.push_back(m.at("model").get<std::string>());
    return names;
}

json test_json(const eval::TTestResult& r) {
    return {{"t", r.t},
            {"p", r.zero_variance ? json(nullptr) : json(r.p)},
            {"df", r.df},
            {"mean_difference", r.mean_difference},
            {"zero_variance", r.zero_variance}};
}

}  // namespace

json cmd_stats(const json& a, const json& b) {
    std::vector<std::uint64_t> seeds_a, seeds_b;
    for (const auto& r : a.at("runs")) seeds_a.push_back(r.at("seed").get<std::uint64_t>());
    for (const auto& r : b.at("runs")) seeds_b.push_back(r.at("seed").get<std::uint64_t>());
    if (seeds_a != seeds_b) throw Error(ErrorCode::LengthMismatch, "reports were run on different seed lists");
    const auto names_b = model_names(b);
    json out;
    out["seeds"] = seeds_a;
    out["comparisons"] = json::array();
    for (const auto& name : model_names(a)) {
        if (std::find(names_b.begin(), names_b.end(), name) == names_b.end()) continue;
        const auto acc = eval::paired_t_test(per_seed(a, name, "balanced_accuracy"), per_seed(b, name, "balanced_accuracy"));
        const auto f1 = eval::paired_t_test(per_seed(a, name, "f1"), per_seed(b, name, "f1"));
        out["comparisons"].push_back({{"model", name}, {"accuracy", test_json(acc)}, {"f1", test_json(f1)}});
    }
    if (out["comparisons"].empty()) throw Error(ErrorCode::SchemaMismatch, "reports share no model");
    return out;
}

std::string format_stats(const json& stats) {
    std::ostringstream out;
    auto p_text = [](const json& t) {
        return t.at("zero_variance").get<bool>() ? std::string("zero variance") : "p = " + csv::format_double(t.at("p").get<double>());
    };
    for (const auto& c : stats.at("comparisons")) {
        out << c.at("model").get<std::string>() << ": accuracy: " << p_text(c.at("accuracy")) << "; F1-score: "
            << p_text(c.at("f1")) << '\n';
    }
    return out.str();
}

json paired_runs(const RunConfig& a, const RunConfig& b, int n_seeds) {
    RunConfig ca = a, cb = b;
    ca.n_seeds = cb.n_seeds = n_seeds;
    cb.seed = ca.seed;
    const json ra = train_eval(ca, load_cohort(ca));
    const json rb = train_eval(cb, load_cohort(cb));
    return cmd_stats(ra, rb);
}

std::string catalog_csv() {
    std::ostringstream out;
    out << "index,column,family,formula\n";
    const auto& cat = features::catalog();
    for (std::size_t i = 0; i < cat.size(); ++i) {
        out << i << ',' << features::qualified_name(cat[i]) << ',' << features::to_string(cat[i].family) << ','
            << csv::quote(std::string(cat[i].formula)) << '\n';
    }
    return out.str();
}

json load_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::MissingFile, path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::BadCsv, path.string() + ": " + e.what());
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
    out << text;
    if (!out) throw Error(ErrorCode::IoFailure, "write failed: " + path.string());
}

json strip_timing(json report) {
    report.erase("timing");
    return report;
}

}  // namespace calcrad::pipeline
