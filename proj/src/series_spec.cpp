#include "zetalab/series_spec.hpp"

#include <numeric>

#include "zetalab/errors.hpp"

namespace zetalab {

int SeriesSpec::chain_total() const { return std::accumulate(chains.begin(), chains.end(), 0); }

void validate(const SeriesSpec& spec) {
  const int n = spec.depth();
  if (n == 0) throw SpecError("series needs at least one position");
  if (static_cast<int>(spec.links.size()) != n - 1) throw SpecError("links must have depth-1 entries");
  if (static_cast<int>(spec.chains.size()) != n - 1) throw SpecError("chains must have depth-1 entries");
  for (int r : spec.chains) {
    if (r < 0) throw SpecError("chain lengths must be non-negative");
  }
  if (spec.arity != 2 && spec.arity != 3) throw SpecError("parameter arity must be 2 or 3");
  if (spec.arity == 2) {
    for (const auto& p : spec.positions) {
      if (p.c != 0) throw SpecError("gamma exponent used in a 2-parameter series");
    }
    if (spec.prefix == Decoration::pochhammer3 || spec.suffix == Decoration::pochhammer3) {
      throw SpecError("3-parameter decoration used in a 2-parameter series");
    }
  }
  for (int i = 0; i < n; ++i) {
    const int need = i + 1 < n ? 1 : 2;
    if (spec.positions[i].total() < need) {
      throw SpecError("convergence guard violated at position " + std::to_string(i + 1) + " of " + describe(spec));
    }
  }
}

std::vector<Layer> flatten(const SeriesSpec& spec) {
  std::vector<Layer> layers;
  layers.reserve(spec.layer_count());
  layers.push_back({spec.positions.front(), Link::strict});
  for (int i = 0; i + 1 < spec.depth(); ++i) {
    for (int t = 0; t < spec.chains[i]; ++t) layers.push_back({Node{1, 0, 0}, Link::weak});
    layers.push_back({spec.positions[i + 1], spec.links[i]});
  }
  return layers;
}

namespace {

SeriesSpec named_two_param(const Index& index, Link link, bool second_kind) {
  if (!index.eval_admissible()) {
    throw ArgumentError("named series need the last index part >= 2: " + index.to_string());
  }
  const auto& k = index.parts();
  const int n = index.depth();
  SeriesSpec spec;
  for (int i = 0; i < n; ++i) {
    if (second_kind) {
      spec.positions.push_back(i + 1 < n ? Node{1, k[i] - 1, 0} : Node{2, k[i] - 2, 0});
    } else {
      spec.positions.push_back(i == 0 ? Node{0, k[i], 0} : Node{1, k[i] - 1, 0});
    }
  }
  spec.links.assign(n - 1, link);
  spec.chains.assign(n - 1, 0);
  spec.prefix = spec.suffix = Decoration::pochhammer;
  spec.arity = 2;
  validate(spec);
  return spec;
}

}  // namespace

SeriesSpec spec_Z_I(const Index& index) { return named_two_param(index, Link::strict, false); }
SeriesSpec spec_Z_II(const Index& index) { return named_two_param(index, Link::strict, true); }
SeriesSpec spec_Zstar_I(const Index& index) { return named_two_param(index, Link::weak, false); }

SeriesSpec spec_Z_single(int a, int b) {
  SeriesSpec spec;
  spec.positions = {Node{a, b, 0}};
  validate(spec);
  return spec;
}

SeriesSpec spec_Zr(const std::vector<int>& r, const std::vector<int>& a, const std::vector<int>& b) {
  if (a.empty() || a.size() != b.size() || r.size() + 1 != a.size()) {
    throw SpecError("spec_Zr needs |a| = |b| = |r| + 1 >= 1");
  }
  SeriesSpec spec;
  for (std::size_t i = 0; i < a.size(); ++i) spec.positions.push_back(Node{a[i], b[i], 0});
  spec.links.assign(r.size(), Link::strict);
  spec.chains = r;
  spec.prefix = spec.suffix = Decoration::pochhammer;
  validate(spec);
  return spec;
}

SeriesSpec spec_Zstar_I3(const Index& index) {
  if (!index.eval_admissible()) {
    throw ArgumentError("named series need the last index part >= 2: " + index.to_string());
  }
  const auto& k = index.parts();
  const int n = index.depth();
  SeriesSpec spec;
  for (int i = 0; i < n; ++i) {
    spec.positions.push_back(i == 0 ? Node{0, 0, k[i]} : Node{1, 1, k[i] - 2});
  }
  spec.links.assign(n - 1, Link::weak);
  spec.chains.assign(n - 1, 0);
  spec.prefix = spec.suffix = Decoration::pochhammer3;
  spec.arity = 3;
  validate(spec);
  return spec;
}

SeriesSpec spec_Z3_single(int a, int b, int c) {
  SeriesSpec spec;
  spec.positions = {Node{a, b, c}};
  spec.arity = 3;
  validate(spec);
  return spec;
}

namespace {

const char* decoration_name(Decoration d) {
  switch (d) {
    case Decoration::none: return "none";
    case Decoration::pochhammer: return "pochhammer";
    case Decoration::pochhammer3: return "pochhammer3";
  }
  return "none";
}

Decoration decoration_from(const std::string& s) {
  if (s == "none") return Decoration::none;
  if (s == "pochhammer") return Decoration::pochhammer;
  if (s == "pochhammer3") return Decoration::pochhammer3;
  throw SpecError("unknown decoration '" + s + "'");
}

}  // namespace

std::string describe(const SeriesSpec& spec) {
  std::string out;
  for (int i = 0; i < spec.depth(); ++i) {
    if (i) {
      for (int t = 0; t < spec.chains[i - 1]; ++t) out += " <= *";
      out += spec.links[i - 1] == Link::strict ? " < " : " <= ";
    }
    const auto& p = spec.positions[i];
    out += "(" + std::to_string(p.a) + "," + std::to_string(p.b);
    if (spec.arity == 3) out += "," + std::to_string(p.c);
    out += ")";
  }
  out += std::string(" pre=") + decoration_name(spec.prefix) + " suf=" + decoration_name(spec.suffix);
  return out;
}

void to_json(nlohmann::json& j, const SeriesSpec& spec) {
  j = nlohmann::json::object();
  auto positions = nlohmann::json::array();
  for (const auto& p : spec.positions) {
    nlohmann::json node{{"a", p.a}, {"b", p.b}};
    if (spec.arity == 3) node["c"] = p.c;
    positions.push_back(node);
  }
  j["positions"] = positions;
  auto links = nlohmann::json::array();
  for (auto l : spec.links) links.push_back(l == Link::strict ? "strict" : "weak");
  j["links"] = links;
  j["chains"] = spec.chains;
  j["prefix"] = decoration_name(spec.prefix);
  j["suffix"] = decoration_name(spec.suffix);
  j["arity"] = spec.arity;
}

void from_json(const nlohmann::json& j, SeriesSpec& spec) {
  try {
    spec = SeriesSpec{};
    spec.arity = j.value("arity", 2);
    for (const auto& node : j.at("positions")) {
      spec.positions.push_back(Node{node.value("a", 0), node.value("b", 0), node.value("c", 0)});
    }
    const int gaps = static_cast<int>(spec.positions.size()) - 1;
    if (j.contains("links")) {
      for (const auto& l : j.at("links")) {
        const auto s = l.get<std::string>();
        if (s != "strict" && s != "weak") throw SpecError("unknown link '" + s + "'");
        spec.links.push_back(s == "strict" ? Link::strict : Link::weak);
      }
    } else if (gaps > 0) {
      spec.links.assign(gaps, Link::strict);
    }
    if (j.contains("chains")) {
      spec.chains = j.at("chains").get<std::vector<int>>();
    } else if (gaps > 0) {
      spec.chains.assign(gaps, 0);
    }
    spec.prefix = decoration_from(j.value("prefix", std::string("none")));
    spec.suffix = decoration_from(j.value("suffix", std::string("none")));
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("malformed series JSON: ") + e.what());
  }
  validate(spec);
}

}  // namespace zetalab
