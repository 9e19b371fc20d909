#include "eit/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <random>
#include <set>
#include <thread>

#include "eit/errors.hpp"

namespace eit {

std::vector<std::vector<std::size_t>> gen_blocks(const StructuredMesh& mesh, int side,
                                                 int d0_min, bool centered_only) {
  std::vector<std::vector<std::size_t>> out;
  if (side < 1 || side > mesh.n_e) return out;
  const int lo = d0_min;
  const int hi = mesh.n_e - side - d0_min;  // inclusive origin bound
  if (hi < lo) return out;

  std::vector<MultiIndex> origins;
  if (centered_only) {
    MultiIndex o{0, 0, 0};
    for (int a = 0; a < mesh.dim; ++a) o[a] = (mesh.n_e - side) / 2;
    bool ok = true;
    for (int a = 0; a < mesh.dim; ++a) ok = ok && o[a] >= lo && o[a] <= hi;
    if (ok) origins.push_back(o);
  } else {
    MultiIndex o{lo, lo, mesh.dim == 3 ? lo : 0};
    while (true) {
      origins.push_back(o);
      int a = 0;
      for (; a < mesh.dim; ++a) {
        if (++o[a] <= hi) break;
        o[a] = lo;
      }
      if (a == mesh.dim) break;
    }
  }

  for (const MultiIndex& o : origins) {
    std::vector<std::size_t> block;
    block.reserve(static_cast<std::size_t>(std::pow(side, mesh.dim)));
    MultiIndex d{0, 0, 0};
    while (true) {
      MultiIndex e = o;
      for (int a = 0; a < mesh.dim; ++a) e[a] += d[a];
      block.push_back(mesh.element_id(e));
      int a = 0;
      for (; a < mesh.dim; ++a) {
        if (++d[a] < side) break;
        d[a] = 0;
      }
      if (a == mesh.dim) break;
    }
    std::sort(block.begin(), block.end());
    out.push_back(std::move(block));
  }
  return out;
}

namespace {

std::vector<std::size_t> neighbors_of(const StructuredMesh& mesh, std::size_t id) {
  std::vector<std::size_t> nb;
  const MultiIndex e = mesh.element_at(id);
  for (int a = 0; a < mesh.dim; ++a)
    for (int s = -1; s <= 1; s += 2) {
      MultiIndex n = e;
      n[a] += s;
      if (mesh.element_in_grid(n)) nb.push_back(mesh.element_id(n));
    }
  return nb;
}

bool in_octant(const StructuredMesh& mesh, std::size_t id) {
  const MultiIndex e = mesh.element_at(id);
  for (int a = 0; a < mesh.dim; ++a)
    if (e[a] >= (mesh.n_e + 1) / 2) return false;
  return true;
}

// Redelmeier-style enumeration of connected sets: each set is generated
// exactly once from its minimal element, growing only with cells of larger
// id than the seed.
struct ConnectedEnumerator {
  const StructuredMesh& mesh;
  const std::vector<char>& allowed;
  int target;
  std::vector<char> marked;
  std::vector<std::size_t> current;
  std::vector<std::vector<std::size_t>>& out;

  void run(std::size_t seed_cell) {
    marked.assign(mesh.element_count(), 0);
    marked[seed_cell] = 1;
    current.clear();
    std::vector<std::size_t> untried{seed_cell};
    grow(untried, seed_cell);
  }

  void grow(std::vector<std::size_t>& untried, std::size_t seed_cell) {
    while (!untried.empty()) {
      const std::size_t u = untried.back();
      untried.pop_back();
      current.push_back(u);
      if (static_cast<int>(current.size()) == target) {
        std::vector<std::size_t> s = current;
        std::sort(s.begin(), s.end());
        out.push_back(std::move(s));
      } else {
        std::vector<std::size_t> next = untried;
        std::vector<std::size_t> added;
        for (std::size_t v : neighbors_of(mesh, u))
          if (v > seed_cell && allowed[v] && !marked[v]) {
            marked[v] = 1;
            added.push_back(v);
            next.push_back(v);
          }
        grow(next, seed_cell);
        for (std::size_t v : added) marked[v] = 0;
      }
      current.pop_back();
      // u stays marked for the remaining branches of this level; the level
      // that introduced it to `untried` removes the mark.
    }
  }
};

}  // namespace

std::vector<std::vector<std::size_t>> gen_connected(const StructuredMesh& mesh, int n_i,
                                                    int d0_min, bool exhaustive,
                                                    std::uint64_t seed, std::size_t sample_count,
                                                    bool octant_restricted) {
  if (n_i < 1) throw ConfigError("connected inclusions need n_i >= 1");
  std::vector<char> allowed(mesh.element_count(), 0);
  std::vector<std::size_t> allowed_ids;
  for (std::size_t id = 0; id < mesh.element_count(); ++id) {
    const MultiIndex e = mesh.element_at(id);
    int d = mesh.n_e;
    for (int a = 0; a < mesh.dim; ++a) d = std::min({d, e[a], mesh.n_e - 1 - e[a]});
    if (d >= d0_min) {
      allowed[id] = 1;
      allowed_ids.push_back(id);
    }
  }

  std::vector<std::vector<std::size_t>> out;
  if (exhaustive) {
    ConnectedEnumerator en{mesh, allowed, n_i, {}, {}, out};
    for (std::size_t s : allowed_ids) {
      if (octant_restricted && !in_octant(mesh, s)) continue;
      en.run(s);
    }
    std::sort(out.begin(), out.end());
    if (sample_count > 0 && sample_count > out.size())
      std::fprintf(stderr, "warning: requested %zu samples but only %zu distinct sets exist\n",
                   sample_count, out.size());
    return out;
  }

  // sampled mode: random face-adjacent growth with rejection and exact
  // element-set deduplication; not uniform over shapes.
  std::vector<std::size_t> seeds = allowed_ids;
  if (octant_restricted) {
    seeds.clear();
    for (std::size_t id : allowed_ids)
      if (in_octant(mesh, id)) seeds.push_back(id);
  }
  if (seeds.empty()) return out;

  std::mt19937_64 rng(seed);
  std::set<std::vector<std::size_t>> dedup;
  const std::size_t max_attempts = 1000 + 500 * sample_count;
  std::size_t attempts = 0;
  while (dedup.size() < sample_count && attempts < max_attempts) {
    ++attempts;
    std::vector<std::size_t> cur{seeds[rng() % seeds.size()]};
    std::set<std::size_t> cur_set(cur.begin(), cur.end());
    bool stuck = false;
    while (static_cast<int>(cur.size()) < n_i && !stuck) {
      std::vector<std::size_t> frontier;
      for (std::size_t c : cur)
        for (std::size_t v : neighbors_of(mesh, c))
          if (allowed[v] && !cur_set.count(v)) frontier.push_back(v);
      std::sort(frontier.begin(), frontier.end());
      frontier.erase(std::unique(frontier.begin(), frontier.end()), frontier.end());
      if (frontier.empty()) {
        stuck = true;
        break;
      }
      const std::size_t pick = frontier[rng() % frontier.size()];
      cur.push_back(pick);
      cur_set.insert(pick);
    }
    if (stuck) continue;
    std::sort(cur.begin(), cur.end());
    dedup.insert(std::move(cur));
  }
  if (dedup.size() < sample_count)
    std::fprintf(stderr, "warning: sampled %zu of %zu requested connected shapes\n", dedup.size(),
                 sample_count);
  out.assign(dedup.begin(), dedup.end());
  return out;
}

std::vector<std::vector<std::size_t>> plan_inclusions(const SweepPlan& plan,
                                                      const StructuredMesh& mesh) {
  std::vector<std::vector<std::size_t>> sets;
  for (int size = plan.size_min; size <= plan.size_max; ++size) {
    std::vector<std::vector<std::size_t>> part;
    switch (plan.generator) {
      case GeneratorKind::BlockSweep:
        part = gen_blocks(mesh, size, plan.d0_min, plan.centered_only);
        break;
      case GeneratorKind::ConnectedExhaustive:
        part = gen_connected(mesh, size, plan.d0_min, true, plan.seed, 0, plan.octant_restricted);
        break;
      case GeneratorKind::ConnectedSampled:
        part = gen_connected(mesh, size, plan.d0_min, false, plan.seed + size,
                             plan.sample_count, plan.octant_restricted);
        break;
    }
    for (auto& s : part) sets.push_back(std::move(s));
  }

  const double cell = std::pow(mesh.h, mesh.dim) / mesh.volume();
  std::vector<std::vector<std::size_t>> kept;
  for (auto& s : sets) {
    if (static_cast<double>(s.size()) * cell > plan.volume_cap) continue;
    if (plan.d03_min > 0) {
      const int face = plan.d03_face < 0 ? 2 * mesh.dim - 1 : plan.d03_face;
      if (inclusion_face_distance(mesh, s, face / 2, face % 2) < plan.d03_min) continue;
    }
    kept.push_back(std::move(s));
  }
  return kept;
}

ElectrodeLayout plan_layout(const SweepPlan& plan, const StructuredMesh& mesh) {
  if (!plan.cem) throw ConfigError("plan has no electrode layout");
  ElectrodeLayout layout;
  for (const auto& r : plan.cem->electrodes)
    layout.electrodes.push_back({face_rectangle(mesh, r.face, r.lo, r.hi), plan.cem->z});
  layout.current = plan.cem->current;
  validate_layout(layout, mesh);
  return layout;
}

std::vector<SolveRecord> run_sweep(const SweepPlan& plan) {
  if (plan.neumann.has_value() == plan.cem.has_value())
    throw ConfigError("plan needs exactly one of neumann/cem excitation");
  if (plan.k_values.empty()) throw ConfigError("plan needs at least one contrast value");
  for (double k : plan.k_values)
    if (!(k > 0.0) || k == 1.0) throw ConfigError("sweep contrasts must be positive and not 1");

  const StructuredMesh mesh = build_mesh(plan.dim, plan.n_e, plan.side_l);
  const std::vector<std::vector<std::size_t>> sets = plan_inclusions(plan, mesh);

  ForwardContext ctx(mesh);
  std::optional<ElectrodeLayout> layout;
  if (plan.cem) layout = plan_layout(plan, mesh);
  if (plan.neumann) validate_spec(*plan.neumann, mesh);

  // warm the homogeneous cache before the worker fan-out
  if (plan.neumann)
    ctx.homogeneous(*plan.neumann);
  else
    ctx.homogeneous_cem(*layout);

  struct Task {
    double k;
    const std::vector<std::size_t>* set;
  };
  std::vector<Task> tasks;
  for (double k : plan.k_values)
    for (const auto& s : sets) tasks.push_back({k, &s});

  std::vector<SolveRecord> records(tasks.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> failures{0};

  RunPairOptions opts;
  opts.test_id = plan.test_id;
  opts.seed = plan.seed;
  opts.d03_face = plan.d03_face;

  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) break;
      try {
        const InclusionMask inc = make_inclusion(mesh, *tasks[i].set, tasks[i].k);
        records[i] = plan.neumann ? run_pair(ctx, *plan.neumann, inc, opts)
                                  : run_pair_cem(ctx, *layout, inc, opts);
      } catch (const SolverError& err) {
        SolveRecord& r = records[i];
        r.test_id = plan.test_id;
        r.model = plan.neumann ? "neumann" : "cem";
        r.dim = mesh.dim;
        r.n_e = mesh.n_e;
        r.k = tasks[i].k;
        r.n_elements = tasks[i].set->size();
        r.seed = plan.seed;
        r.status = "solver_error";
        failures.fetch_add(1);
      }
    }
  };

  int nworkers = plan.workers > 0 ? plan.workers
                                  : static_cast<int>(std::thread::hardware_concurrency());
  nworkers = std::max(1, std::min<int>(nworkers, static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < nworkers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  if (failures.load() * 100 > tasks.size() && failures.load() > 0)
    throw SolverError("more than 1% of sweep solves failed");
  return records;
}

}  // namespace eit
