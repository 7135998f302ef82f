#include "calcrad/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "calcrad/csv.hpp"
#include "calcrad/error.hpp"

namespace calcrad {

std::string to_string(RunMode m) { return m == RunMode::Radiomics ? "radiomics" : "embeddings"; }

std::string to_string(TrainComposition c) { return c == TrainComposition::Mixed ? "mixed" : "noncontrast"; }

RunMode run_mode_from_string(std::string_view s) {
    if (s == "radiomics") return RunMode::Radiomics;
    if (s == "embeddings") return RunMode::Embeddings;
    throw Error(ErrorCode::ConfigError, "mode must be radiomics or embeddings, got '" + std::string(s) + "'");
}

TrainComposition composition_from_string(std::string_view s) {
    if (s == "mixed") return TrainComposition::Mixed;
    if (s == "noncontrast" || s == "noncontrast-only") return TrainComposition::NonContrastOnly;
    throw Error(ErrorCode::ConfigError, "train composition must be mixed or noncontrast, got '" + std::string(s) + "'");
}

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    bool ok = false;
    const double d = csv::parse_double(v, &ok);
    if (!ok || !std::isfinite(d)) throw Error(ErrorCode::ConfigError, key + ": not a number: '" + v + "'");
    return d;
}

int to_int(const std::string& key, const std::string& v) {
    const double d = to_double(key, v);
    if (d != std::floor(d) || std::abs(d) > 1e9) throw Error(ErrorCode::ConfigError, key + ": not an integer: '" + v + "'");
    return static_cast<int>(d);
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw Error(ErrorCode::ConfigError, key + ": not a boolean: '" + v + "'");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& v) {
    std::filesystem::path p(v);
    return p.is_absolute() || base.empty() ? p : base / p;
}

}  // namespace

learn::HyperGrid RunConfig::grid_for(const std::string& model) const {
    learn::HyperGrid g = learn::default_grid(model);
    const auto it = grid_overrides.find(model);
    if (it == grid_overrides.end()) return g;
    for (const auto& [param, values] : it->second) {
        auto axis = std::find_if(g.axes.begin(), g.axes.end(), [&](const auto& a) { return a.first == param; });
        if (axis == g.axes.end()) g.axes.emplace_back(param, values);
        else axis->second = values;
    }
    return g;
}

RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
    RunConfig c;
    c.text = std::string(text);
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::ConfigError, "line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(std::string_view(t).substr(0, eq));
        const std::string v = trim(std::string_view(t).substr(eq + 1));
        auto& ex = c.extraction;
        if (key == "manifest") c.manifest = resolve(base_dir, v);
        else if (key == "features") c.features = resolve(base_dir, v);
        else if (key == "embeddings") c.embeddings = resolve(base_dir, v);
        else if (key == "mode") c.mode = run_mode_from_string(v);
        else if (key == "train_composition") c.composition = composition_from_string(v);
        else if (key == "bin_mode") {
            if (v == "width") ex.bin_mode = features::BinMode::Width;
            else if (v == "count") ex.bin_mode = features::BinMode::Count;
            else throw Error(ErrorCode::ConfigError, "bin_mode must be width or count");
        } else if (key == "bin_width") {
            ex.bin_width = to_double(key, v);
            if (!(ex.bin_width > 0)) throw Error(ErrorCode::ConfigError, "bin_width must be > 0");
        } else if (key == "bin_count") {
            ex.bin_count = to_int(key, v);
            if (ex.bin_count < 1) throw Error(ErrorCode::ConfigError, "bin_count must be >= 1");
        } else if (key == "resample") {
            if (v == "none") ex.resample = false;
            else if (v == "isotropic") ex.resample = true;
            else throw Error(ErrorCode::ConfigError, "resample must be none or isotropic");
        } else if (key == "clip_lo") {
            ex.clip = true;
            ex.clip_lo = to_double(key, v);
        } else if (key == "clip_hi") {
            ex.clip = true;
            ex.clip_hi = to_double(key, v);
        } else if (key == "glcm_distance") {
            ex.glcm_distance = to_int(key, v);
            if (ex.glcm_distance < 1) throw Error(ErrorCode::ConfigError, "glcm_distance must be >= 1");
        } else if (key == "gldm_alpha") {
            ex.gldm_alpha = to_int(key, v);
            if (ex.gldm_alpha < 0) throw Error(ErrorCode::ConfigError, "gldm_alpha must be >= 0");
        } else if (key == "selection_threshold") {
            c.selection_threshold = to_double(key, v);
            if (!(c.selection_threshold > 0 && c.selection_threshold <= 1)) {
                throw Error(ErrorCode::ConfigError, "selection_threshold must be in (0, 1]");
            }
        } else if (key == "embedding_selection") c.embedding_selection = to_bool(key, v);
        else if (key == "embedding_provenance") c.embedding_provenance = v;
        else if (key == "models") {
            c.models = split_list(v);
            if (c.models.empty()) throw Error(ErrorCode::ConfigError, "models is empty");
            for (const auto& m : c.models) (void)learn::default_grid(m);
        } else if (key.rfind("grid.", 0) == 0) {
            const auto dot = key.find('.', 5);
            if (dot == std::string::npos) throw Error(ErrorCode::ConfigError, key + ": expected grid.<model>.<param>");
            const std::string model = key.substr(5, dot - 5);
            (void)learn::default_grid(model);
            std::vector<double> values;
            for (const auto& item : split_list(v)) values.push_back(item == "none" ? -1.0 : to_double(key, item));
            if (values.empty()) throw Error(ErrorCode::ConfigError, key + ": empty list");
            c.grid_overrides[model][key.substr(dot + 1)] = values;
        } else if (key == "seed") {
            const double d = to_double(key, v);
            if (d < 0 || d != std::floor(d) || d >= 18446744073709551616.0) throw Error(ErrorCode::ConfigError, "seed must be a u64");
            c.seed = std::stoull(v);
        } else if (key == "n_seeds") {
            c.n_seeds = to_int(key, v);
            if (c.n_seeds < 1) throw Error(ErrorCode::ConfigError, "n_seeds must be >= 1");
        } else if (key == "test_fraction") {
            c.test_fraction = to_double(key, v);
            if (!(c.test_fraction > 0 && c.test_fraction < 1)) throw Error(ErrorCode::ConfigError, "test_fraction must be in (0, 1)");
        } else if (key == "cv_folds") {
            c.cv_folds = to_int(key, v);
            if (c.cv_folds < 2) throw Error(ErrorCode::ConfigError, "cv_folds must be >= 2");
        } else if (key == "shuffle_labels") c.shuffle_labels = to_bool(key, v);
        else throw Error(ErrorCode::ConfigError, "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    if (c.extraction.clip && !(c.extraction.clip_lo < c.extraction.clip_hi)) {
        throw Error(ErrorCode::ConfigError, "clip_lo must be < clip_hi");
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ConfigError, "cannot read config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.parent_path());
}

}  // namespace calcrad
