#include "redpath/signature_io.hpp"

#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "redpath/format.hpp"

namespace redpath {

nlohmann::ordered_json signature_to_json(const TensorSeries<double>& x) {
  nlohmann::ordered_json j;
  j["d"] = x.dim();
  j["depth"] = x.depth();
  auto coeffs = nlohmann::ordered_json::object();
  for (const auto& w : x.words()) coeffs[w.str()] = x.coefficient(w);
  j["coeffs"] = std::move(coeffs);
  return j;
}

TensorSeries<double> signature_from_json(const nlohmann::ordered_json& j) {
  if (!j.is_object()) throw std::invalid_argument("signature JSON must be an object");
  for (const char* field : {"d", "depth", "coeffs"}) {
    if (!j.contains(field)) throw std::invalid_argument(std::string("signature JSON lacks \"") + field + "\"");
  }
  if (!j["d"].is_number_integer() || !j["depth"].is_number_integer()) {
    throw std::invalid_argument("\"d\" and \"depth\" must be integers");
  }
  if (!j["coeffs"].is_object()) throw std::invalid_argument("\"coeffs\" must be an object");

  TensorSeries<double> x(j["d"].get<int>(), j["depth"].get<int>());
  for (const auto& [key, value] : j["coeffs"].items()) {
    if (!value.is_number()) throw std::invalid_argument("coefficient of '" + key + "' is not a number");
    const Word w = Word::parse(key);
    try {
      x.set(w, value.get<double>());
    } catch (const std::out_of_range& e) {
      throw std::invalid_argument(e.what());
    }
  }
  return x;
}

AxisPath parse_axis_path(const std::string& text, int d) {
  AxisPath path;
  if (text.find_first_not_of(" \t") == std::string::npos) return path;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("path item '" + item + "' is not r:index");
    const std::string r_text = item.substr(0, colon), i_text = item.substr(colon + 1);
    char* end = nullptr;
    const double r = std::strtod(r_text.c_str(), &end);
    if (r_text.empty() || *end != '\0' || !std::isfinite(r)) {
      throw std::invalid_argument("bad displacement '" + r_text + "'");
    }
    const long idx = std::strtol(i_text.c_str(), &end, 10);
    if (i_text.empty() || *end != '\0' || idx < 1 || idx > kMaxLetters || (d > 0 && idx > d)) {
      throw std::invalid_argument("bad axis index '" + i_text + "'");
    }
    path.push_back({r, static_cast<int>(idx)});
  }
  return path;
}

std::string format_axis_path(const AxisPath& path) {
  std::string s;
  for (const auto& seg : path) {
    if (!s.empty()) s += ',';
    s += format_number(seg.r) + ":" + std::to_string(seg.index);
  }
  return s;
}

}  // namespace redpath
