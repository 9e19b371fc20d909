#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace eit {

// One forward pair (with/without inclusion) reduced to the quantities the
// size-estimate analysis consumes.
struct SolveRecord {
  std::string test_id;
  std::string model;  // "neumann" | "cem"
  int dim = 0;
  int n_e = 0;
  double k = 0.0;
  int d0_elems = 0;
  int d03_elems = 0;
  std::size_t n_elements = 0;
  double volume_fraction = 0.0;
  double W0 = 0.0;
  double W = 0.0;
  double gap = 0.0;  // |W - W0| / W0
  std::uint64_t seed = 0;
  std::string status = "ok";
};

/// Fixed-order CSV with 17-significant-digit doubles (lossless round trip).
std::string records_to_csv(const std::vector<SolveRecord>& records);
void write_csv(const std::string& path, const std::vector<SolveRecord>& records);
std::vector<SolveRecord> parse_csv_text(const std::string& text);
std::vector<SolveRecord> read_csv(const std::string& path);

std::string record_to_json(const SolveRecord& rec);

}  // namespace eit
