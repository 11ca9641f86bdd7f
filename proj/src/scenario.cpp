#include "glide/scenario.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace glide {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string join(const std::string &parent, const std::string &key) {
    return parent.empty() ? key : parent + "." + key;
}

const json &member(const json &j, const std::string &key, const std::string &parent) {
    if (!j.is_object()) throw ScenarioError(parent + ": expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw ScenarioError(join(parent, key) + ": missing required field");
    return *it;
}

double number(const json &j, const std::string &key, const std::string &parent) {
    const json &v = member(j, key, parent);
    if (!v.is_number()) throw ScenarioError(join(parent, key) + ": expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ScenarioError(join(parent, key) + ": must be finite");
    return d;
}

double number_or(const json &j, const std::string &key, const std::string &parent, double fallback) {
    if (!j.contains(key)) return fallback;
    return number(j, key, parent);
}

std::string string_field(const json &j, const std::string &key, const std::string &parent) {
    const json &v = member(j, key, parent);
    if (!v.is_string()) throw ScenarioError(join(parent, key) + ": expected a string");
    return v.get<std::string>();
}

json read_json_file(const fs::path &path, const std::string &field) {
    std::ifstream in(path);
    if (!in) throw ScenarioError(field + ": cannot open '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::exception &e) {
        throw ScenarioError(field + ": invalid JSON in '" + path.string() + "': " + e.what());
    }
}

fs::path resolve(const fs::path &base_dir, const std::string &ref) {
    fs::path p(ref);
    if (p.is_relative()) p = base_dir / p;
    return p;
}

}  // namespace

fs::path data_dir() {
    if (const char *env = std::getenv("GLIDE_DATA_DIR")) return fs::path(env);
    return fs::path(GLIDE_DATA_DIR);
}

std::shared_ptr<const DtmGrid> DtmCache::get(const fs::path &path, DtmFormat format, double clearance) {
    const auto key = std::make_tuple(fs::weakly_canonical(path).string(), static_cast<int>(format), clearance);
    std::lock_guard lock(mutex_);
    auto it = grids_.find(key);
    if (it != grids_.end()) return it->second;
    auto grid = std::make_shared<const DtmGrid>(load_dtm(path, format, clearance));
    grids_.emplace(key, grid);
    return grid;
}

AircraftParams parse_aircraft(const json &j, const std::string &field) {
    AircraftParams p;
    if (j.contains("name")) {
        if (!j["name"].is_string()) throw ScenarioError(join(field, "name") + ": expected a string");
        p.name = j["name"].get<std::string>();
    }
    p.mass_kg = number(j, "mass_kg", field);
    p.wing_area_m2 = number(j, "wing_area_m2", field);
    p.cd0 = number(j, "cd0", field);
    p.k_induced = number(j, "k_induced", field);
    p.cl_max = number(j, "cl_max", field);
    p.v_max_mps = number(j, "v_max_mps", field);
    p.air_density_kgpm3 = number_or(j, "air_density_kgpm3", field, p.air_density_kgpm3);
    p.gravity = number_or(j, "gravity_mps2", field, p.gravity);
    try {
        AircraftModel check(p);
    } catch (const std::invalid_argument &e) {
        throw ScenarioError(field + ": " + e.what());
    }
    return p;
}

AircraftParams load_aircraft(const fs::path &path) { return parse_aircraft(read_json_file(path, "aircraft")); }

Scenario parse_scenario(const json &j, const fs::path &base_dir, DtmCache *cache) {
    if (!j.is_object()) throw ScenarioError("scenario: expected a JSON object");
    Scenario sc;
    sc.source = "inline";

    const json &ac = member(j, "aircraft", "");
    if (ac.is_string()) {
        const std::string ref = ac.get<std::string>();
        fs::path path = resolve(base_dir, ref);
        if (!fs::exists(path)) {
            const fs::path bundled = data_dir() / ref;
            const fs::path bundled_json = data_dir() / (ref + ".json");
            if (fs::exists(bundled)) {
                path = bundled;
            } else if (fs::exists(bundled_json)) {
                path = bundled_json;
            } else {
                throw ScenarioError("aircraft: cannot find '" + ref + "'");
            }
        }
        sc.aircraft = parse_aircraft(read_json_file(path, "aircraft"));
    } else if (ac.is_object()) {
        sc.aircraft = parse_aircraft(ac);
    } else {
        throw ScenarioError("aircraft: expected a file reference or an object");
    }

    if (j.contains("wind")) {
        const json &w = j["wind"];
        sc.wind = {number_or(w, "w_north_mps", "wind", 0.0), number_or(w, "w_east_mps", "wind", 0.0)};
    }

    const json &opts = j.contains("options") ? j["options"] : json::object();
    if (!opts.is_object()) throw ScenarioError("options: expected an object");
    sc.options.clearance_m = number_or(opts, "clearance_m", "options", sc.options.clearance_m);
    sc.options.bank_limit_deg = number_or(opts, "bank_limit_deg", "options", sc.options.bank_limit_deg);
    sc.options.replan_interval_m = number_or(opts, "replan_interval_m", "options", sc.options.replan_interval_m);
    sc.options.manifold_resolution_deg =
        number_or(opts, "manifold_resolution_deg", "options", sc.options.manifold_resolution_deg);
    if (opts.contains("turns")) {
        if (!opts["turns"].is_boolean()) throw ScenarioError("options.turns: expected a boolean");
        sc.options.turns = opts["turns"].get<bool>();
    }
    if (opts.contains("initial_heading_deg")) {
        sc.options.initial_heading_deg = number(opts, "initial_heading_deg", "options");
    }
    if (!(sc.options.bank_limit_deg > 0.0 && sc.options.bank_limit_deg < 90.0)) {
        throw ScenarioError("options.bank_limit_deg: must be in (0, 90)");
    }
    if (!(sc.options.replan_interval_m > 0.0)) throw ScenarioError("options.replan_interval_m: must be positive");
    if (!(sc.options.manifold_resolution_deg > 0.0 && sc.manifold_resolution() <= 0.05)) {
        throw ScenarioError("options.manifold_resolution_deg: must be in (0, 2.8648]");
    }
    if (sc.options.clearance_m < 0.0) throw ScenarioError("options.clearance_m: must be nonnegative");

    const json &dtm = member(j, "dtm", "");
    const std::string format_name = string_field(dtm, "format", "dtm");
    DtmFormat format;
    try {
        format = parse_dtm_format(format_name);
    } catch (const TerrainError &e) {
        throw ScenarioError(std::string("dtm.format: ") + e.what());
    }
    try {
        if (dtm.contains("recipe")) {
            if (format != DtmFormat::kSyntheticSpec) throw ScenarioError("dtm.recipe: only valid for synthetic terrain");
            sc.dtm = std::make_shared<const DtmGrid>(parse_synthetic_spec(dtm["recipe"].dump(), sc.options.clearance_m));
        } else {
            const fs::path path = resolve(base_dir, string_field(dtm, "path", "dtm"));
            if (!fs::exists(path)) throw ScenarioError("dtm.path: cannot find '" + path.string() + "'");
            sc.dtm = cache ? cache->get(path, format, sc.options.clearance_m)
                           : std::make_shared<const DtmGrid>(load_dtm(path, format, sc.options.clearance_m));
        }
    } catch (const TerrainError &e) {
        throw ScenarioError(std::string("dtm: ") + e.what());
    }

    const json &cut = member(j, "cutoff", "");
    sc.cutoff = {number(cut, "x_m", "cutoff"), number(cut, "y_m", "cutoff")};
    sc.cutoff_altitude = number(cut, "altitude_m", "cutoff");
    if (!sc.dtm->contains(sc.cutoff)) throw ScenarioError("cutoff: position outside the DTM");
    if (!(sc.cutoff_altitude > sc.dtm->dtm_at(sc.cutoff))) {
        std::ostringstream os;
        os << "cutoff.altitude_m: " << sc.cutoff_altitude << " m is not above DTM " << sc.dtm->dtm_at(sc.cutoff)
           << " m (elevation plus clearance)";
        throw ScenarioError(os.str());
    }

    const json &sites = member(j, "sites", "");
    if (!sites.is_array() || sites.empty()) throw ScenarioError("sites: expected a nonempty array");
    for (std::size_t k = 0; k < sites.size(); ++k) {
        const std::string field = "sites[" + std::to_string(k) + "]";
        const json &s = sites[k];
        Site site;
        site.id = s.contains("id") ? string_field(s, "id", field) : "site" + std::to_string(k + 1);
        site.position = {number(s, "x_m", field), number(s, "y_m", field)};
        site.weight = number_or(s, "weight", field, 1.0);
        if (!sc.dtm->contains(site.position)) throw ScenarioError(field + ": position outside the DTM");
        sc.sites.push_back(site);
    }
    return sc;
}

Scenario parse_scenario_text(const std::string &text, const fs::path &base_dir, DtmCache *cache) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception &e) {
        throw ScenarioError(std::string("scenario: invalid JSON: ") + e.what());
    }
    return parse_scenario(j, base_dir, cache);
}

Scenario load_scenario(const fs::path &path, DtmCache *cache) {
    Scenario sc = parse_scenario(read_json_file(path, "scenario"), path.parent_path(), cache);
    sc.source = path.filename().string();
    return sc;
}

}  // namespace glide
