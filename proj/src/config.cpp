#include "eit/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "eit/errors.hpp"

namespace eit {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
}

template <typename T>
T get_or(const json& obj, const std::string& key, T fallback) {
  if (!obj.contains(key)) return fallback;
  return obj.at(key).get<T>();
}

std::array<int, 2> pair_of(const json& arr, const std::string& where) {
  if (!arr.is_array() || arr.size() > 2 || arr.empty())
    throw ConfigError(where + " must be an array of 1 or 2 indices");
  std::array<int, 2> out{0, 0};
  for (std::size_t i = 0; i < arr.size(); ++i) out[i] = arr[i].get<int>();
  if (arr.size() == 1) out[1] = 0;
  return out;
}

NeumannSpec parse_excitation(const json& ex, int dim) {
  require_keys(ex, "excitation", {"kind", "axis", "amplitude", "n", "odd", "patches"});
  const std::string kind = ex.at("kind").get<std::string>();
  if (kind == "uniform") {
    return uniform_spec(get_or(ex, "amplitude", 1.0), get_or(ex, "axis", -1));
  }
  if (kind == "cosine") {
    return cosine_spec(ex.at("n").get<int>(), get_or(ex, "amplitude", 1.0),
                       get_or(ex, "odd", false), get_or(ex, "axis", -1));
  }
  if (kind == "two_patch") {
    if (!ex.contains("patches")) {
      NeumannSpec s;
      s.kind = NeumannKind::TwoPatch;
      s.patches.clear();  // resolved against the mesh later
      return s;
    }
    std::vector<PatchSpec> patches;
    for (const json& p : ex.at("patches")) {
      require_keys(p, "patch", {"face", "lo", "hi", "amplitude"});
      PatchSpec ps;
      ps.face = p.at("face").get<int>();
      ps.lo = pair_of(p.at("lo"), "patch lo");
      ps.hi = pair_of(p.at("hi"), "patch hi");
      ps.amplitude = p.at("amplitude").get<double>();
      patches.push_back(ps);
    }
    return two_patch_spec(std::move(patches));
  }
  (void)dim;
  throw ConfigError("unknown excitation kind \"" + kind + "\"");
}

SweepPlan::CemPlan parse_electrodes(const json& el, int dim, int n_e, double side_l) {
  require_keys(el, "electrodes", {"zeta", "z", "current", "rects", "preset", "axis"});
  SweepPlan::CemPlan cem;
  if (el.contains("z") == el.contains("zeta"))
    throw ConfigError("electrodes need exactly one of \"z\" or \"zeta\"");
  cem.z = el.contains("z") ? el.at("z").get<double>()
                           : el.at("zeta").get<double>() * side_l;
  if (!(cem.z > 0.0)) throw ConfigError("surface impedance must be positive");
  cem.current = el.at("current").get<std::vector<double>>();
  if (el.contains("preset")) {
    const std::string preset = el.at("preset").get<std::string>();
    if (preset != "full_faces") throw ConfigError("unknown electrode preset \"" + preset + "\"");
    const int axis = get_or(el, "axis", 0);
    const std::array<int, 2> lo{0, 0};
    const std::array<int, 2> hi{n_e - 1, dim == 3 ? n_e - 1 : 0};
    cem.electrodes.push_back({axis * 2 + 1, lo, hi});
    cem.electrodes.push_back({axis * 2, lo, hi});
  } else {
    for (const json& r : el.at("rects")) {
      require_keys(r, "electrode rect", {"face", "lo", "hi"});
      cem.electrodes.push_back(
          {r.at("face").get<int>(), pair_of(r.at("lo"), "rect lo"), pair_of(r.at("hi"), "rect hi")});
    }
  }
  if (cem.electrodes.size() != cem.current.size())
    throw ConfigError("current pattern size differs from electrode count");
  return cem;
}

}  // namespace

StructuredMesh ExperimentConfig::make_mesh() const { return build_mesh(dim, n_e, side_l); }

NeumannSpec ExperimentConfig::make_neumann() const {
  if (!neumann) throw ConfigError("config has no Neumann excitation");
  if (neumann->kind == NeumannKind::TwoPatch && neumann->patches.empty())
    return default_two_patch(make_mesh());
  return *neumann;
}

ElectrodeLayout ExperimentConfig::make_layout(const StructuredMesh& mesh) const {
  if (!cem) throw ConfigError("config has no electrode layout");
  ElectrodeLayout layout;
  for (const auto& r : cem->electrodes)
    layout.electrodes.push_back({face_rectangle(mesh, r.face, r.lo, r.hi), cem->z});
  layout.current = cem->current;
  validate_layout(layout, mesh);
  return layout;
}

SweepPlan ExperimentConfig::make_plan() const {
  if (!has_sweep) throw ConfigError("config has no sweep section");
  SweepPlan p = plan;
  p.dim = dim;
  p.n_e = n_e;
  p.side_l = side_l;
  p.test_id = test_id;
  if (model == "neumann")
    p.neumann = make_neumann();
  else
    p.cem = cem;
  return p;
}

ExperimentConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    throw ConfigError(std::string("config JSON: ") + err.what());
  }
  if (!doc.is_object()) throw ConfigError("config root must be a JSON object");
  require_keys(doc, "config",
               {"model", "test_id", "mesh", "excitation", "electrodes", "inclusion", "sweep",
                "output"});

  ExperimentConfig cfg;
  cfg.model = get_or<std::string>(doc, "model", "neumann");
  if (cfg.model != "neumann" && cfg.model != "cem")
    throw ConfigError("model must be \"neumann\" or \"cem\"");

  const json& mesh = doc.at("mesh");
  require_keys(mesh, "mesh", {"dim", "n_e", "side_l"});
  cfg.dim = mesh.at("dim").get<int>();
  cfg.n_e = mesh.at("n_e").get<int>();
  cfg.side_l = get_or(mesh, "side_l", 1.0);
  cfg.make_mesh();  // validate early

  cfg.test_id = get_or<std::string>(doc, "test_id", cfg.model == "cem" ? "cem" : "T1");

  if (cfg.model == "neumann") {
    if (!doc.contains("excitation")) throw ConfigError("neumann model needs an excitation");
    cfg.neumann = parse_excitation(doc.at("excitation"), cfg.dim);
  } else {
    if (!doc.contains("electrodes")) throw ConfigError("cem model needs electrodes");
    cfg.cem = parse_electrodes(doc.at("electrodes"), cfg.dim, cfg.n_e, cfg.side_l);
  }

  if (doc.contains("inclusion")) {
    const json& inc = doc.at("inclusion");
    require_keys(inc, "inclusion", {"elements", "block", "k"});
    cfg.k_single = inc.at("k").get<double>();
    if (!(*cfg.k_single > 0.0)) throw ConfigError("inclusion contrast k must be positive");
    std::vector<std::vector<int>> elems;
    if (inc.contains("elements")) {
      for (const json& e : inc.at("elements")) elems.push_back(e.get<std::vector<int>>());
    } else if (inc.contains("block")) {
      const json& blk = inc.at("block");
      require_keys(blk, "inclusion block", {"origin", "side"});
      const std::vector<int> origin = blk.at("origin").get<std::vector<int>>();
      const int side = blk.at("side").get<int>();
      if (static_cast<int>(origin.size()) != cfg.dim)
        throw ConfigError("inclusion block origin dimension mismatch");
      std::vector<int> idx(cfg.dim, 0);
      while (true) {
        std::vector<int> e(cfg.dim);
        for (int a = 0; a < cfg.dim; ++a) e[a] = origin[a] + idx[a];
        elems.push_back(e);
        int a = 0;
        for (; a < cfg.dim; ++a) {
          if (++idx[a] < side) break;
          idx[a] = 0;
        }
        if (a == cfg.dim) break;
      }
    } else {
      throw ConfigError("inclusion needs \"elements\" or \"block\"");
    }
    cfg.inclusion_elements = std::move(elems);
  }

  if (doc.contains("sweep")) {
    const json& sw = doc.at("sweep");
    require_keys(sw, "sweep",
                 {"k", "generator", "size_min", "size_max", "d0_min", "d03_min", "d03_face",
                  "volume_cap", "centered_only", "octant", "sample_count", "seed", "workers"});
    cfg.has_sweep = true;
    SweepPlan& p = cfg.plan;
    p.k_values = sw.at("k").get<std::vector<double>>();
    for (double k : p.k_values)
      if (!(k > 0.0) || k == 1.0)
        throw ConfigError("sweep contrasts must be positive and not 1");
    const std::string gen = get_or<std::string>(sw, "generator", "blocks");
    if (gen == "blocks")
      p.generator = GeneratorKind::BlockSweep;
    else if (gen == "connected")
      p.generator = GeneratorKind::ConnectedExhaustive;
    else if (gen == "connected_sampled")
      p.generator = GeneratorKind::ConnectedSampled;
    else
      throw ConfigError("unknown generator \"" + gen + "\"");
    p.size_min = get_or(sw, "size_min", 1);
    p.size_max = get_or(sw, "size_max", p.size_min);
    if (p.size_min < 1 || p.size_max < p.size_min) throw ConfigError("bad sweep size range");
    p.d0_min = get_or(sw, "d0_min", 1);
    p.d03_min = get_or(sw, "d03_min", 0);
    p.d03_face = get_or(sw, "d03_face", -1);
    p.volume_cap = get_or(sw, "volume_cap", 0.06);
    if (!(p.volume_cap > 0.0 && p.volume_cap <= 1.0))
      throw ConfigError("volume cap must lie in (0, 1]");
    p.centered_only = get_or(sw, "centered_only", false);
    p.octant_restricted = get_or(sw, "octant", false);
    p.sample_count = get_or<std::size_t>(sw, "sample_count", 64);
    p.seed = get_or<std::uint64_t>(sw, "seed", 1);
    p.workers = get_or(sw, "workers", 0);
  }

  cfg.output_path = get_or<std::string>(doc, "output", "");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace eit
