#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace saucer {

/// Scalar control t ↦ u(t) with an analytic derivative.
///
/// JSON forms: a number (constant), a term object, or an array of terms
/// that are summed. Terms:
///   {"type":"poly","coeffs":[c0,c1,...]}                  Σ c_k t^k
///   {"type":"sin","amp":A,"freq":w,"phase":p}             A sin(w t + p)
///   {"type":"cos","amp":A,"freq":w,"phase":p}             A cos(w t + p)
///   {"type":"piecewise","breaks":[t1..tn],"values":[v0..vn]}
///       v0 on t < t1, v_k on [t_k, t_{k+1}), derivative 0
class ControlSignal {
 public:
  enum class Kind { Poly, Sin, Piecewise };
  struct Term {
    Kind kind = Kind::Poly;
    std::vector<double> coeffs;
    double amp = 0.0;
    double freq = 0.0;
    double phase = 0.0;
    std::vector<double> breaks;
    std::vector<double> values;
  };

  ControlSignal() = default;
  static ControlSignal constant(double c);
  static ControlSignal polynomial(std::vector<double> coeffs);
  static ControlSignal sine(double amp, double freq, double phase = 0.0);
  static ControlSignal piecewise(std::vector<double> breaks, std::vector<double> values);
  static ControlSignal from_json(const nlohmann::json& j);

  ControlSignal& operator+=(const ControlSignal& other);

  double value(double t) const;
  double derivative(double t) const;
  nlohmann::json to_json() const;

 private:
  std::vector<Term> terms_;
};

class ControlFormatError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace saucer
