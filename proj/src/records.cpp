#include "eit/records.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "eit/errors.hpp"

namespace eit {

namespace {

// 17 significant digits round-trip doubles losslessly
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* kHeader =
    "test_id,model,dim,n_e,k,d0_elems,d03_elems,n_elements,volume_fraction,W0,W,gap,seed,status";

}  // namespace

std::string records_to_csv(const std::vector<SolveRecord>& records) {
  std::ostringstream os;
  os << kHeader << "\n";
  for (const SolveRecord& r : records) {
    os << r.test_id << ',' << r.model << ',' << r.dim << ',' << r.n_e << ',' << fmt(r.k) << ','
       << r.d0_elems << ',' << r.d03_elems << ',' << r.n_elements << ','
       << fmt(r.volume_fraction) << ',' << fmt(r.W0) << ',' << fmt(r.W) << ',' << fmt(r.gap)
       << ',' << r.seed << ',' << r.status << "\n";
  }
  return os.str();
}

void write_csv(const std::string& path, const std::vector<SolveRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open output file: " + path);
  out << records_to_csv(records);
}

std::vector<SolveRecord> parse_csv_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty CSV");
  if (line != kHeader) throw ConfigError("unexpected CSV header: " + line);
  std::vector<SolveRecord> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
      if (c == ',') {
        fields.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    fields.push_back(cur);
    if (fields.size() != 14)
      throw ConfigError("CSV line " + std::to_string(lineno) + ": expected 14 fields");
    SolveRecord r;
    try {
      r.test_id = fields[0];
      r.model = fields[1];
      r.dim = std::stoi(fields[2]);
      r.n_e = std::stoi(fields[3]);
      r.k = std::stod(fields[4]);
      r.d0_elems = std::stoi(fields[5]);
      r.d03_elems = std::stoi(fields[6]);
      r.n_elements = std::stoull(fields[7]);
      r.volume_fraction = std::stod(fields[8]);
      r.W0 = std::stod(fields[9]);
      r.W = std::stod(fields[10]);
      r.gap = std::stod(fields[11]);
      r.seed = std::stoull(fields[12]);
      r.status = fields[13];
    } catch (const std::exception&) {
      throw ConfigError("CSV line " + std::to_string(lineno) + ": malformed numeric field");
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<SolveRecord> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open CSV: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv_text(buf.str());
}

std::string record_to_json(const SolveRecord& r) {
  std::ostringstream os;
  os << "{\n"
     << "  \"test_id\": \"" << r.test_id << "\",\n"
     << "  \"model\": \"" << r.model << "\",\n"
     << "  \"dim\": " << r.dim << ",\n"
     << "  \"n_e\": " << r.n_e << ",\n"
     << "  \"k\": " << fmt(r.k) << ",\n"
     << "  \"d0_elems\": " << r.d0_elems << ",\n"
     << "  \"d03_elems\": " << r.d03_elems << ",\n"
     << "  \"n_elements\": " << r.n_elements << ",\n"
     << "  \"volume_fraction\": " << fmt(r.volume_fraction) << ",\n"
     << "  \"W0\": " << fmt(r.W0) << ",\n"
     << "  \"W\": " << fmt(r.W) << ",\n"
     << "  \"gap\": " << fmt(r.gap) << ",\n"
     << "  \"seed\": " << r.seed << ",\n"
     << "  \"status\": \"" << r.status << "\"\n"
     << "}";
  return os.str();
}

}  // namespace eit
