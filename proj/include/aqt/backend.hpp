#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "aqt/linalg.hpp"
#include "aqt/rng.hpp"

namespace aqt {

struct OutcomeCounts {
  Vec3 axis;
  long shots = 0;
  long n_plus = 0;

  long n_minus() const { return shots - n_plus; }
};

// Source of measurement counts: binomial simulation (ideal or depolarizing)
// or playback of a recorded sequence. A backend is a stateful stream; use
// one consumer at a time.
class Backend {
 public:
  enum class Kind { ideal, depolarizing, replay };

  static Backend ideal(const Vec3& r, Rng rng);
  static Backend depolarizing(const Vec3& r, double lambda, Rng rng);
  static Backend replay(std::vector<OutcomeCounts> records);

  // Ideal: n_plus ~ Binomial(shots, (1 + n.r)/2), sampled one Bernoulli
  // draw per shot so a depolarizing backend equals an ideal backend on
  // (1-lambda) r exactly under the same seed. Replay: next stored record,
  // axis matched componentwise within 1e-6.
  OutcomeCounts measure(const Vec3& axis, long shots);

  Kind kind() const { return kind_; }
  double lambda() const { return lambda_; }

  // When enabled, every emitted OutcomeCounts is appended to log() in call
  // order, suitable for save_record().
  void enable_log(bool on) { logging_ = on; }
  const std::vector<OutcomeCounts>& log() const { return log_; }

 private:
  Backend() = default;

  Kind kind_ = Kind::ideal;
  Vec3 r_{};
  double lambda_ = 0.0;
  Rng rng_{0};
  std::vector<OutcomeCounts> records_;
  std::size_t cursor_ = 0;
  bool logging_ = false;
  std::vector<OutcomeCounts> log_;
};

// Line format: `nx ny nz shots n_plus`, space-separated, '#' comment lines
// ignored. Malformed lines raise ParseError with the line number.
Backend load_record(const std::string& path);
std::vector<OutcomeCounts> parse_records(std::istream& in,
                                         const std::string& origin);
void save_record(const std::vector<OutcomeCounts>& records,
                 const std::string& path);

}  // namespace aqt
