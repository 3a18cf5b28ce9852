#include "rdbp/scenario_io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "rdbp/format.hpp"

namespace rdbp {

ScenarioError::ScenarioError(std::size_t line, std::string key, const std::string& message)
    : std::invalid_argument("line " + std::to_string(line) +
                            (key.empty() ? std::string() : ", key '" + key + "'") + ": " +
                            message),
      line_(line),
      key_(std::move(key)) {}

namespace {

struct Entry {
  std::string value;
  std::size_t line = 0;
};

struct Section {
  std::size_t line = 0;
  std::map<std::string, Entry> entries;
};

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::set<std::string> population{"offspring", "production", "production_law",
                                                "production_shape", "claims"};
  static const std::map<std::string, std::set<std::string>> keys{
      {"model", {"type", "phi", "phi_sequence", "alpha", "variant", "thresholds", "reference"}},
      {"home", population},
      {"immigrant", population},
      {"newcomer", population},
      {"stream", {"kind", "ell", "count"}},
      {"run",
       {"h0", "i0", "s0", "horizon", "replicates", "seed", "carry_over", "arrival_semantics",
        "arrival_child_claims", "population_cap", "track_claim_cdf"}},
  };
  return keys;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::map<std::string, Section> split_sections(std::string_view text) {
  std::map<std::string, Section> sections;
  Section* current = nullptr;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = trim(text.substr(pos, end - pos));
    ++line_no;
    pos = end + 1;
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ScenarioError(line_no, "", "malformed section header");
      const std::string name(trim(line.substr(1, line.size() - 2)));
      if (!known_keys().count(name)) {
        throw ScenarioError(line_no, name, "unknown section [" + name + "]");
      }
      if (sections.count(name)) throw ScenarioError(line_no, name, "duplicate section");
      current = &sections[name];
      current->line = line_no;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ScenarioError(line_no, "", "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    if (!current) throw ScenarioError(line_no, key, "key outside of a section");
    const auto section_name = std::find_if(sections.begin(), sections.end(), [&](const auto& kv) {
                                return &kv.second == current;
                              })->first;
    if (!known_keys().at(section_name).count(key)) {
      throw ScenarioError(line_no, key, "unknown key in [" + section_name + "]");
    }
    if (current->entries.count(key)) throw ScenarioError(line_no, key, "duplicate key");
    current->entries[key] = Entry{std::string(trim(line.substr(eq + 1))), line_no};
  }
  return sections;
}

class SectionReader {
 public:
  SectionReader(const Section* section, std::string name)
      : section_(section), name_(std::move(name)) {}

  bool present() const { return section_ != nullptr; }
  bool has(const std::string& key) const { return section_ && section_->entries.count(key); }
  std::size_t line() const { return section_ ? section_->line : 0; }
  std::size_t line_of(const std::string& key) const {
    return has(key) ? section_->entries.at(key).line : line();
  }

  const std::string& text(const std::string& key) const {
    if (!has(key)) throw ScenarioError(line(), key, "missing in [" + name_ + "]");
    return section_->entries.at(key).value;
  }

  double number(const std::string& key) const { return parse_double(key, text(key)); }

  std::uint64_t integer(const std::string& key) const {
    const std::string& v = text(key);
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
      throw ScenarioError(line_of(key), key, "malformed integer '" + v + "'");
    }
    return out;
  }

  bool boolean(const std::string& key) const {
    const std::string& v = text(key);
    if (v == "true") return true;
    if (v == "false") return false;
    throw ScenarioError(line_of(key), key, "expected true or false, got '" + v + "'");
  }

  std::vector<double> list(const std::string& key) const {
    std::vector<double> out;
    const std::string& v = text(key);
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = v.find(',', start);
      const std::string item(trim(std::string_view(v).substr(
          start, comma == std::string::npos ? std::string::npos : comma - start)));
      out.push_back(parse_double(key, item));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return out;
  }

  template <class F>
  auto guarded(const std::string& key, F&& f) const {
    try {
      return f();
    } catch (const ScenarioError&) {
      throw;
    } catch (const std::exception& e) {
      throw ScenarioError(line_of(key), key, e.what());
    }
  }

 private:
  double parse_double(const std::string& key, const std::string& v) const {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
      throw ScenarioError(line_of(key), key, "malformed number '" + v + "'");
    }
    return out;
  }

  const Section* section_;
  std::string name_;
};

SubpopulationSpec read_population(const SectionReader& in, bool need_claims) {
  SubpopulationSpec spec;
  spec.offspring.pmf = in.list("offspring");
  in.guarded("offspring", [&] {
    spec.offspring.validate();
    return 0;
  });
  spec.production.mean = in.has("production") ? in.number("production") : 0.0;
  if (in.has("production_law")) {
    const std::string& law = in.text("production_law");
    if (law == "constant") {
      spec.production.kind = ProductionKind::constant;
    } else if (law == "gamma") {
      spec.production.kind = ProductionKind::gamma;
    } else {
      throw ScenarioError(in.line_of("production_law"), "production_law",
                          "expected constant or gamma, got '" + law + "'");
    }
  }
  if (in.has("production_shape")) spec.production.shape = in.number("production_shape");
  in.guarded("production", [&] {
    spec.production.validate();
    return 0;
  });
  if (in.has("claims") || need_claims) {
    spec.claims = in.guarded("claims", [&] { return parse_distribution(in.text("claims")); });
  }
  return spec;
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (k) out += ",";
    out += format_shortest(values[k]);
  }
  return out;
}

void write_population(std::ostringstream& os, const std::string& name,
                      const SubpopulationSpec& spec) {
  os << "\n[" << name << "]\n";
  os << "offspring = " << join(spec.offspring.pmf) << "\n";
  os << "production = " << format_shortest(spec.production.mean) << "\n";
  os << "production_law = "
     << (spec.production.kind == ProductionKind::constant ? "constant" : "gamma") << "\n";
  if (spec.production.kind == ProductionKind::gamma) {
    os << "production_shape = " << format_shortest(spec.production.shape) << "\n";
  }
  os << "claims = " << spec.claims.descriptor() << "\n";
}

}  // namespace

ParsedScenario parse_scenario(std::string_view text) {
  const auto sections = split_sections(text);
  const auto reader = [&](const std::string& name) {
    const auto it = sections.find(name);
    return SectionReader(it == sections.end() ? nullptr : &it->second, name);
  };
  const SectionReader model = reader("model");
  const SectionReader home = reader("home");
  const SectionReader imm = reader("immigrant");
  const SectionReader newcomer = reader("newcomer");
  const SectionReader stream = reader("stream");
  const SectionReader run = reader("run");

  if (!model.present()) throw ScenarioError(1, "", "missing [model] section");
  ParsedScenario parsed;
  ScenarioSpec& spec = parsed.spec;

  const std::string& type = model.text("type");
  if (type == "I") {
    spec.model = ModelKind::model1;
  } else if (type == "II") {
    spec.model = ModelKind::model2;
  } else if (type == "III") {
    spec.model = ModelKind::model3;
  } else if (type == "GW-pair") {
    spec.model = ModelKind::gw_pair;
  } else {
    throw ScenarioError(model.line_of("type"), "type", "expected I, II, III or GW-pair");
  }
  if (model.has("phi")) spec.phi.limit = model.number("phi");
  if (model.has("phi_sequence")) spec.phi.sequence = model.list("phi_sequence");
  for (double v : spec.phi.sequence) {
    if (!(v >= 0.0) || !(v < 1.0)) {
      throw ScenarioError(model.line_of("phi_sequence"), "phi_sequence", "values must lie in [0, 1)");
    }
  }
  if (!(spec.phi.limit >= 0.0) || !(spec.phi.limit < 1.0)) {
    throw ScenarioError(model.line_of("phi"), "phi", "phi must lie in [0, 1)");
  }
  if (spec.model == ModelKind::model1 && (spec.phi.limit != 0.0 || !spec.phi.sequence.empty())) {
    throw ScenarioError(model.line_of("phi"), "phi", "model I has no integration");
  }
  if (model.has("alpha")) {
    spec.alpha = model.number("alpha");
    if (!(*spec.alpha > 0.0) || !std::isfinite(*spec.alpha)) {
      throw ScenarioError(model.line_of("alpha"), "alpha", "alpha must be positive");
    }
  }
  if (model.has("variant")) {
    const std::string& v = model.text("variant");
    if (v == "as-printed") {
      spec.variant = Model3Variant::as_printed;
    } else if (v == "derivation-consistent") {
      spec.variant = Model3Variant::derivation_consistent;
    } else {
      throw ScenarioError(model.line_of("variant"), "variant",
                          "expected as-printed or derivation-consistent");
    }
  }
  if (model.has("thresholds")) {
    spec.thresholds = model.list("thresholds");
    model.guarded("thresholds", [&] {
      return quantize(ClaimDistribution(), spec.thresholds).kind();
    });
  }
  if (model.has("reference")) {
    const std::string& v = model.text("reference");
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = v.find(',', start);
      const std::string item(trim(std::string_view(v).substr(
          start, comma == std::string::npos ? std::string::npos : comma - start)));
      const std::size_t colon = item.find(':');
      double tau = 0.0;
      double alpha = 0.0;
      const auto bad = [&] {
        return ScenarioError(model.line_of("reference"), "reference",
                             "expected tau:alpha pairs, got '" + item + "'");
      };
      if (colon == std::string::npos) throw bad();
      auto r1 = std::from_chars(item.data(), item.data() + colon, tau);
      auto r2 = std::from_chars(item.data() + colon + 1, item.data() + item.size(), alpha);
      if (r1.ec != std::errc() || r1.ptr != item.data() + colon || r2.ec != std::errc() ||
          r2.ptr != item.data() + item.size()) {
        throw bad();
      }
      spec.reference.emplace_back(tau, alpha);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }

  const bool need_claims = spec.model != ModelKind::gw_pair;
  if (!home.present()) throw ScenarioError(1, "", "missing [home] section");
  if (!imm.present()) throw ScenarioError(1, "", "missing [immigrant] section");
  spec.home = read_population(home, need_claims);
  spec.imm = read_population(imm, need_claims);
  if (newcomer.present()) spec.newcomer = read_population(newcomer, true);

  if (stream.present()) {
    const std::string& kind = stream.text("kind");
    if (kind == "none") {
      spec.stream.kind = StreamKind::none;
    } else if (kind == "constant") {
      spec.stream.kind = StreamKind::constant;
      spec.stream.value = static_cast<double>(stream.integer("count"));
    } else if (kind == "proportional") {
      spec.stream.kind = StreamKind::proportional;
      spec.stream.value = stream.number("ell");
      if (!(spec.stream.value >= 0.0) || !std::isfinite(spec.stream.value)) {
        throw ScenarioError(stream.line_of("ell"), "ell", "ell must be nonnegative");
      }
    } else {
      throw ScenarioError(stream.line_of("kind"), "kind",
                          "expected none, constant or proportional");
    }
    if (spec.stream.kind != StreamKind::proportional && stream.has("ell")) {
      throw ScenarioError(stream.line_of("ell"), "ell", "ell needs kind = proportional");
    }
    if (spec.stream.kind != StreamKind::constant && stream.has("count")) {
      throw ScenarioError(stream.line_of("count"), "count", "count needs kind = constant");
    }
    if (spec.stream.kind != StreamKind::none) {
      if (spec.model != ModelKind::model3) {
        throw ScenarioError(stream.line_of("kind"), "kind", "arrival streams need model III");
      }
      if (!spec.newcomer) {
        throw ScenarioError(stream.line_of("kind"), "kind", "arrival streams need a [newcomer] section");
      }
    }
  }

  if (run.present()) {
    if (run.has("h0")) spec.h0 = run.integer("h0");
    if (run.has("i0")) spec.i0 = run.integer("i0");
    if (run.has("s0")) spec.s0 = run.number("s0");
    if (run.has("horizon")) spec.horizon = run.integer("horizon");
    if (run.has("replicates")) spec.replicates = run.integer("replicates");
    if (run.has("seed")) spec.seed = run.integer("seed");
    if (run.has("carry_over")) spec.carry_over = run.boolean("carry_over");
    if (run.has("track_claim_cdf")) spec.track_claim_cdf = run.boolean("track_claim_cdf");
    if (run.has("population_cap")) spec.population_cap = run.number("population_cap");
    if (run.has("arrival_semantics")) {
      const std::string& v = run.text("arrival_semantics");
      if (v == "causal") {
        spec.arrival_semantics = ArrivalSemantics::causal;
      } else if (v == "literal-brs") {
        spec.arrival_semantics = ArrivalSemantics::literal_brs;
      } else {
        throw ScenarioError(run.line_of("arrival_semantics"), "arrival_semantics",
                            "expected causal or literal-brs");
      }
    }
    if (run.has("arrival_child_claims")) {
      const std::string& v = run.text("arrival_child_claims");
      if (v == "immigrant") {
        spec.arrival_child_claims = ArrivalChildClaims::immigrant;
      } else if (v == "newcomer") {
        spec.arrival_child_claims = ArrivalChildClaims::newcomer;
      } else {
        throw ScenarioError(run.line_of("arrival_child_claims"), "arrival_child_claims",
                            "expected immigrant or newcomer");
      }
    }
    for (const char* key : {"h0", "i0", "s0", "horizon", "replicates", "population_cap"}) {
      run.guarded(key, [&] {
        spec.validate();
        return 0;
      });
    }
  }
  try {
    spec.validate();
  } catch (const std::exception& e) {
    throw ScenarioError(model.line(), "", e.what());
  }

  if (spec.model != ModelKind::gw_pair) {
    std::vector<SubpopulationSpec> classes{spec.home, spec.imm};
    if (spec.newcomer && spec.stream.kind != StreamKind::none) classes.push_back(*spec.newcomer);
    const ScarcityCheck scarcity = scarcity_check(classes);
    if (!scarcity.holds) {
      parsed.warnings.push_back("scarce-resources condition violated: total production exceeds "
                                "total expected claims by " +
                                format_shortest(-scarcity.margin));
    }
  }
  return parsed;
}

std::string serialize_scenario(const ScenarioSpec& spec) {
  std::ostringstream os;
  os << "[model]\n";
  os << "type = " << to_string(spec.model) << "\n";
  os << "phi = " << format_shortest(spec.phi.limit) << "\n";
  if (!spec.phi.sequence.empty()) os << "phi_sequence = " << join(spec.phi.sequence) << "\n";
  if (spec.alpha) os << "alpha = " << format_shortest(*spec.alpha) << "\n";
  os << "variant = " << to_string(spec.variant) << "\n";
  if (!spec.thresholds.empty()) os << "thresholds = " << join(spec.thresholds) << "\n";
  if (!spec.reference.empty()) {
    os << "reference = ";
    for (std::size_t k = 0; k < spec.reference.size(); ++k) {
      if (k) os << ",";
      os << format_shortest(spec.reference[k].first) << ":"
         << format_shortest(spec.reference[k].second);
    }
    os << "\n";
  }
  write_population(os, "home", spec.home);
  write_population(os, "immigrant", spec.imm);
  if (spec.newcomer) write_population(os, "newcomer", *spec.newcomer);
  os << "\n[stream]\n";
  os << "kind = " << to_string(spec.stream.kind) << "\n";
  if (spec.stream.kind == StreamKind::proportional) {
    os << "ell = " << format_shortest(spec.stream.value) << "\n";
  } else if (spec.stream.kind == StreamKind::constant) {
    os << "count = " << static_cast<std::uint64_t>(spec.stream.value) << "\n";
  }
  os << "\n[run]\n";
  os << "h0 = " << spec.h0 << "\n";
  os << "i0 = " << spec.i0 << "\n";
  os << "s0 = " << format_shortest(spec.s0) << "\n";
  os << "horizon = " << spec.horizon << "\n";
  os << "replicates = " << spec.replicates << "\n";
  os << "seed = " << spec.seed << "\n";
  os << "carry_over = " << (spec.carry_over ? "true" : "false") << "\n";
  os << "arrival_semantics = " << to_string(spec.arrival_semantics) << "\n";
  os << "arrival_child_claims = " << to_string(spec.arrival_child_claims) << "\n";
  os << "population_cap = " << format_shortest(spec.population_cap) << "\n";
  os << "track_claim_cdf = " << (spec.track_claim_cdf ? "true" : "false") << "\n";
  return os.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open scenario file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace rdbp
