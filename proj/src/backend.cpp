#include "aqt/backend.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "aqt/bloch.hpp"
#include "aqt/errors.hpp"

namespace aqt {

Backend Backend::ideal(const Vec3& r, Rng rng) {
  Backend b;
  b.kind_ = Kind::ideal;
  b.r_ = r;
  b.rng_ = rng;
  return b;
}

Backend Backend::depolarizing(const Vec3& r, double lambda, Rng rng) {
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("depolarizing lambda must lie in [0,1]");
  Backend b;
  b.kind_ = Kind::depolarizing;
  b.r_ = r;
  b.lambda_ = lambda;
  b.rng_ = rng;
  return b;
}

Backend Backend::replay(std::vector<OutcomeCounts> records) {
  Backend b;
  b.kind_ = Kind::replay;
  b.records_ = std::move(records);
  return b;
}

OutcomeCounts Backend::measure(const Vec3& axis, long shots) {
  if (shots <= 0) throw std::invalid_argument("shots must be positive");

  OutcomeCounts out;
  if (kind_ == Kind::replay) {
    if (cursor_ >= records_.size())
      throw ReplayMissError("replay backend exhausted after " +
                            std::to_string(cursor_) + " records");
    const OutcomeCounts& rec = records_[cursor_];
    const double miss = std::max({std::fabs(rec.axis.x - axis.x),
                                  std::fabs(rec.axis.y - axis.y),
                                  std::fabs(rec.axis.z - axis.z)});
    if (miss > 1e-6)
      throw ReplayMissError("replay record " + std::to_string(cursor_) +
                            " stores a different axis (mismatch " +
                            std::to_string(miss) + ")");
    if (rec.shots != shots)
      throw ReplayMissError("replay record " + std::to_string(cursor_) +
                            " stores " + std::to_string(rec.shots) +
                            " shots, not " + std::to_string(shots));
    ++cursor_;
    out = rec;
  } else {
    const Vec3 r_eff = kind_ == Kind::depolarizing ? r_ * (1.0 - lambda_) : r_;
    const double p = born_probability(r_eff, {axis, +1});
    long hits = 0;
    for (long i = 0; i < shots; ++i) hits += rng_.bernoulli(p) ? 1 : 0;
    out = {axis, shots, hits};
  }
  if (logging_) log_.push_back(out);
  return out;
}

std::vector<OutcomeCounts> parse_records(std::istream& in,
                                         const std::string& origin) {
  std::vector<OutcomeCounts> records;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;

    std::istringstream fields(line);
    OutcomeCounts rec;
    std::string extra;
    if (!(fields >> rec.axis.x >> rec.axis.y >> rec.axis.z >> rec.shots >>
          rec.n_plus) ||
        (fields >> extra))
      throw ParseError(origin + ":" + std::to_string(line_no) +
                       ": expected `nx ny nz shots n_plus`");
    if (rec.shots < 1)
      throw ParseError(origin + ":" + std::to_string(line_no) +
                       ": shots must be positive");
    if (rec.n_plus < 0 || rec.n_plus > rec.shots)
      throw ParseError(origin + ":" + std::to_string(line_no) +
                       ": n_plus outside [0, shots]");
    records.push_back(rec);
  }
  return records;
}

Backend load_record(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open counts file");
  return Backend::replay(parse_records(in, path));
}

void save_record(const std::vector<OutcomeCounts>& records,
                 const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << "# nx ny nz shots n_plus\n";
  char buf[160];
  for (const OutcomeCounts& rec : records) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %ld %ld\n", rec.axis.x,
                  rec.axis.y, rec.axis.z, rec.shots, rec.n_plus);
    out << buf;
  }
  if (!out) throw std::runtime_error(path + ": write failed");
}

}  // namespace aqt
