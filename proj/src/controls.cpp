#include "saucer/controls.hpp"

#include <algorithm>
#include <cmath>

namespace saucer {

using nlohmann::json;

ControlSignal ControlSignal::constant(double c) { return polynomial({c}); }

ControlSignal ControlSignal::polynomial(std::vector<double> coeffs) {
  ControlSignal s;
  Term t;
  t.kind = Kind::Poly;
  t.coeffs = std::move(coeffs);
  s.terms_.push_back(std::move(t));
  return s;
}

ControlSignal ControlSignal::sine(double amp, double freq, double phase) {
  ControlSignal s;
  Term t;
  t.kind = Kind::Sin;
  t.amp = amp;
  t.freq = freq;
  t.phase = phase;
  s.terms_.push_back(t);
  return s;
}

ControlSignal ControlSignal::piecewise(std::vector<double> breaks, std::vector<double> values) {
  if (values.size() != breaks.size() + 1) throw ControlFormatError("piecewise control needs one more value than breaks");
  if (!std::is_sorted(breaks.begin(), breaks.end())) throw ControlFormatError("piecewise breaks must be sorted");
  ControlSignal s;
  Term t;
  t.kind = Kind::Piecewise;
  t.breaks = std::move(breaks);
  t.values = std::move(values);
  s.terms_.push_back(std::move(t));
  return s;
}

ControlSignal& ControlSignal::operator+=(const ControlSignal& other) {
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  return *this;
}

namespace {

double number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ControlFormatError(std::string("control field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

std::vector<double> numbers(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array())
    throw ControlFormatError(std::string("control term needs an array '") + key + "'");
  std::vector<double> out;
  for (const auto& x : j.at(key)) {
    if (!x.is_number()) throw ControlFormatError(std::string("non-numeric entry in '") + key + "'");
    out.push_back(x.get<double>());
  }
  return out;
}

ControlSignal term_from_json(const json& j) {
  if (j.is_number()) return ControlSignal::constant(j.get<double>());
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
    throw ControlFormatError("control term must be a number or an object with a 'type'");
  const std::string type = j.at("type").get<std::string>();
  if (type == "poly") return ControlSignal::polynomial(numbers(j, "coeffs"));
  if (type == "sin" || type == "cos") {
    double amp = number(j, "amp", 1.0), freq = number(j, "freq", 1.0), phase = number(j, "phase", 0.0);
    if (type == "cos") phase += M_PI / 2;
    return ControlSignal::sine(amp, freq, phase);
  }
  if (type == "piecewise") return ControlSignal::piecewise(numbers(j, "breaks"), numbers(j, "values"));
  throw ControlFormatError("unknown control term type '" + type + "'");
}

}  // namespace

ControlSignal ControlSignal::from_json(const json& j) {
  if (j.is_array()) {
    ControlSignal s;
    for (const auto& t : j) s += term_from_json(t);
    return s;
  }
  return term_from_json(j);
}

double ControlSignal::value(double t) const {
  double sum = 0.0;
  for (const auto& term : terms_) {
    switch (term.kind) {
      case Kind::Poly: {
        double acc = 0.0;
        for (auto it = term.coeffs.rbegin(); it != term.coeffs.rend(); ++it) acc = acc * t + *it;
        sum += acc;
        break;
      }
      case Kind::Sin:
        sum += term.amp * std::sin(term.freq * t + term.phase);
        break;
      case Kind::Piecewise: {
        auto k = std::upper_bound(term.breaks.begin(), term.breaks.end(), t) - term.breaks.begin();
        sum += term.values[static_cast<std::size_t>(k)];
        break;
      }
    }
  }
  return sum;
}

double ControlSignal::derivative(double t) const {
  double sum = 0.0;
  for (const auto& term : terms_) {
    switch (term.kind) {
      case Kind::Poly: {
        double acc = 0.0;
        for (std::size_t k = term.coeffs.size(); k-- > 1;) acc = acc * t + static_cast<double>(k) * term.coeffs[k];
        sum += acc;
        break;
      }
      case Kind::Sin:
        sum += term.amp * term.freq * std::cos(term.freq * t + term.phase);
        break;
      case Kind::Piecewise:
        break;
    }
  }
  return sum;
}

json ControlSignal::to_json() const {
  json out = json::array();
  for (const auto& term : terms_) {
    switch (term.kind) {
      case Kind::Poly:
        out.push_back({{"type", "poly"}, {"coeffs", term.coeffs}});
        break;
      case Kind::Sin:
        out.push_back({{"type", "sin"}, {"amp", term.amp}, {"freq", term.freq}, {"phase", term.phase}});
        break;
      case Kind::Piecewise:
        out.push_back({{"type", "piecewise"}, {"breaks", term.breaks}, {"values", term.values}});
        break;
    }
  }
  return out;
}

}  // namespace saucer
