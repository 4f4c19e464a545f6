#include "fairpost/rule.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include "fairpost/csv.hpp"

namespace fairpost {

void ModificationRule::validate() const {
  if (z.empty()) throw std::invalid_argument("rule has no weights");
  for (double v : z) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("rule weights must be finite");
    }
  }
}

void save_rule(const std::string& path, const ModificationRule& rule) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write file '" + path + "'");
  out << "K: " << rule.z.size() << "\n";
  for (std::size_t k = 0; k < rule.z.size(); ++k) {
    out << "z" << k << ": " << format_double(rule.z[k]) << "\n";
  }
  const auto& p = rule.provenance;
  out << "algorithm: " << p.algorithm << "\n";
  out << "delta: " << format_double(p.delta) << "\n";
  out << "seed: " << p.seed << "\n";
  out << "feasible: " << (p.feasible ? 1 : 0) << "\n";
  out << "val_accuracy: " << format_double(p.val_accuracy) << "\n";
  out << "val_cc: " << format_double(p.val_cc) << "\n";
  out << "val_flips: " << p.val_flips << "\n";
}

ModificationRule load_rule(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto pos = line.find(": ");
    if (pos == std::string::npos) {
      throw ParseError(path + ": malformed rule line '" + line + "'");
    }
    kv[line.substr(0, pos)] = line.substr(pos + 2);
  }
  auto need = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw ParseError(path + ": missing key '" + key + "'");
    return it->second;
  };
  ModificationRule rule;
  const std::size_t K =
      static_cast<std::size_t>(parse_double(need("K"), path + ": K"));
  for (std::size_t k = 0; k < K; ++k) {
    rule.z.push_back(
        parse_double(need("z" + std::to_string(k)), path + ": z" + std::to_string(k)));
  }
  auto& p = rule.provenance;
  if (kv.count("algorithm")) p.algorithm = kv["algorithm"];
  if (kv.count("delta")) p.delta = parse_double(kv["delta"], path + ": delta");
  if (kv.count("seed")) {
    p.seed = static_cast<std::uint64_t>(
        std::stoull(kv["seed"]));
  }
  if (kv.count("feasible")) {
    p.feasible = parse_binary(kv["feasible"], path + ": feasible") != 0;
  }
  if (kv.count("val_accuracy")) {
    p.val_accuracy = parse_double(kv["val_accuracy"], path + ": val_accuracy");
  }
  if (kv.count("val_cc")) p.val_cc = parse_double(kv["val_cc"], path + ": val_cc");
  if (kv.count("val_flips")) {
    p.val_flips = static_cast<std::int64_t>(std::stoll(kv["val_flips"]));
  }
  rule.validate();
  return rule;
}

}  // namespace fairpost
