#include <algorithm>
#include <charconv>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "rdbp/distributions.hpp"

namespace rdbp {
namespace {

using Fields = std::map<std::string, std::string, std::less<>>;

// Splits "k=v k={...}" into fields; braces nest.
Fields tokenize(std::string_view text) {
  Fields out;
  std::size_t i = 0;
  const auto skip_ws = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
  };
  for (skip_ws(); i < text.size(); skip_ws()) {
    const std::size_t eq = text.find('=', i);
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("distribution descriptor: expected key=value near '" +
                                  std::string(text.substr(i)) + "'");
    }
    std::string key(text.substr(i, eq - i));
    if (key.empty() || key.find_first_of(" \t{}") != std::string::npos) {
      throw std::invalid_argument("distribution descriptor: bad key '" + key + "'");
    }
    i = eq + 1;
    std::string value;
    if (i < text.size() && text[i] == '{') {
      int depth = 0;
      const std::size_t start = i + 1;
      for (; i < text.size(); ++i) {
        if (text[i] == '{') ++depth;
        if (text[i] == '}' && --depth == 0) break;
      }
      if (depth != 0) throw std::invalid_argument("distribution descriptor: unbalanced braces");
      value = std::string(text.substr(start, i - start));
      ++i;
    } else {
      const std::size_t start = i;
      while (i < text.size() && text[i] != ' ' && text[i] != '\t') ++i;
      value = std::string(text.substr(start, i - start));
    }
    if (!out.emplace(key, value).second) {
      throw std::invalid_argument("distribution descriptor: duplicate key '" + key + "'");
    }
  }
  return out;
}

double to_number(std::string_view key, std::string_view text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw std::invalid_argument("distribution descriptor: malformed number for '" +
                                std::string(key) + "': '" + std::string(text) + "'");
  }
  return v;
}

std::vector<double> to_list(std::string_view key, std::string_view text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::size_t end = comma == std::string_view::npos ? text.size() : comma;
    out.push_back(to_number(key, text.substr(start, end - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

class FieldReader {
 public:
  explicit FieldReader(Fields fields) : fields_(std::move(fields)) {}

  const std::string& take(const std::string& key) {
    const auto it = fields_.find(key);
    if (it == fields_.end()) {
      throw std::invalid_argument("distribution descriptor: missing key '" + key + "'");
    }
    used_.push_back(key);
    return it->second;
  }
  bool has(const std::string& key) const { return fields_.count(key) > 0; }
  double number(const std::string& key) { return to_number(key, take(key)); }

  void finish() const {
    for (const auto& [key, value] : fields_) {
      if (std::find(used_.begin(), used_.end(), key) == used_.end()) {
        throw std::invalid_argument("distribution descriptor: unknown key '" + key + "'");
      }
    }
  }

 private:
  Fields fields_;
  std::vector<std::string> used_;
};

}  // namespace

ClaimDistribution parse_distribution(std::string_view text) {
  FieldReader in(tokenize(text));
  const std::string kind = in.take("kind");
  ClaimDistribution result = [&] {
    if (kind == "beta") return ClaimDistribution::beta(in.number("a"), in.number("b"));
    if (kind == "uniform") return ClaimDistribution::uniform(in.number("lo"), in.number("hi"));
    if (kind == "sinusoid") {
      const double n = in.number("n");
      if (n != static_cast<int>(n)) {
        throw std::invalid_argument("sinusoid n must be an integer");
      }
      const std::string& sign = in.take("sign");
      if (sign != "+" && sign != "-") throw std::invalid_argument("sinusoid sign must be + or -");
      return ClaimDistribution::sinusoid(static_cast<int>(n), sign == "+" ? 1 : -1);
    }
    if (kind == "empirical") return ClaimDistribution::empirical(to_list("values", in.take("values")));
    if (kind == "mixture") {
      std::vector<WeightedPart> parts;
      for (int j = 1; in.has("w" + std::to_string(j)); ++j) {
        const std::string idx = std::to_string(j);
        parts.push_back({in.number("w" + idx), parse_distribution(in.take("d" + idx))});
      }
      return mix(parts);
    }
    if (kind == "quantized") {
      const ClaimDistribution base = parse_distribution(in.take("base"));
      return quantize(base, to_list("thresholds", in.take("thresholds")));
    }
    if (kind == "lottery") {
      const ClaimDistribution base = parse_distribution(in.take("base"));
      LotteryParams p;
      p.cutoff = in.number("u");
      p.reduction = in.number("c");
      p.collapse_probability = in.number("a");
      if (in.has("g")) {
        p.divisor_knots.clear();
        const std::string& g = in.take("g");
        std::size_t start = 0;
        while (start <= g.size()) {
          const std::size_t comma = g.find(',', start);
          const std::string knot =
              g.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
          const std::size_t colon = knot.find(':');
          if (colon == std::string::npos) {
            throw std::invalid_argument("lottery g knots must be written x:g");
          }
          p.divisor_knots.emplace_back(to_number("g", std::string_view(knot).substr(0, colon)),
                                       to_number("g", std::string_view(knot).substr(colon + 1)));
          if (comma == std::string::npos) break;
          start = comma + 1;
        }
      }
      return lottery_transform(base, p);
    }
    throw std::invalid_argument("distribution descriptor: unknown kind '" + kind + "'");
  }();
  in.finish();
  return result;
}

}  // namespace rdbp
