// Copyright 2026 The nameorigin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nameorigin/synthgen.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "ini.h"
#include "nameorigin/unicode.h"

namespace nameorigin {
namespace {

constexpr std::string_view kDefaultConfig = R"(# Default synthetic benchmark: 8 countries in two groups.
homophily = 0.9
owners = 20000
contacts_min = 10
contacts_max = 30
labels = 20000
label_noise = 0.01
seed = 7
first_names = 500
last_names = 800
zipf = 1.0

[country XA]
leaf = Aldoria
group = West
population = 60000000
sample_rate = 1.0
syllables = bal, dor, fen, gar, hal, kel, mor, nel, tor, val, wen, ric, bjo, sig, ulf, tho, rag, eir
first_endings = o, ar, ulf
last_endings = sson, berg, holm, dahl

[country XB]
leaf = Brevia
group = West
population = 55000000
sample_rate = 0.8
syllables = ari, ben, car, del, fio, gio, lor, mar, nic, pao, ros, ter, vit, ugo, sil, tan, bru, cel
first_endings = ino, ella, io
last_endings = elli, etti, ini, one

[country XC]
leaf = Castia
group = West
population = 45000000
sample_rate = 0.6
syllables = alv, bel, cas, dom, fer, gon, her, lop, men, nav, ped, rod, sal, vaz, qui, jua, ort, pin
first_endings = ito, ita, es
last_endings = ez, ado, eira, anes

[country XD]
leaf = Dravia
group = West
population = 70000000
sample_rate = 0.5
syllables = бор, вла, гор, дми, жен, зор, иго, кир, лев, мир, над, оле, рус, свя, тим, фед, яро, шум
first_endings = а, ий, ей
last_endings = ов, ев, ский, енко

[country XE]
leaf = Eastia
group = East
population = 50000000
sample_rate = 0.7
syllables = 김, 박, 민, 준, 서, 연, 지, 현, 수, 영, 성, 호, 재, 은, 혜, 동, 진, 태, 경, 미, 한, 상, 우, 윤
ending_rate = 0

[country XF]
leaf = Fuyan
group = East
population = 80000000
sample_rate = 0.4
syllables = zhang, wei, xiao, ming, hua, jun, ying, chen, liang, zhou, qiang, lin, feng, yun, hong, bao, tian, xin
ending_rate = 0

[country XG]
leaf = Gemaya
group = East
population = 40000000
sample_rate = 0.5
syllables = ta, ka, mi, hi, ro, yu, ki, sa, na, to, shi, ko, ha, ya, ma, su, no, ri
first_syllables = 2-3
last_syllables = 2-3
first_endings = ko, ro, to
last_endings = moto, yama, kawa, da

[country XH]
leaf = Hindora
group = East
population = 75000000
sample_rate = 0.3
syllables = raj, sun, ani, pra, dee, kum, vik, ash, nit, mah, ram, sha, gan, pri, anu, har, dev, sur
first_endings = a, esh, ita
last_endings = wal, endra, pur, ari
)";

double Uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t UniformIndex(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % n);
}

class Categorical {
 public:
  explicit Categorical(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) cumulative_.push_back(total += w);
    for (double& c : cumulative_) c /= total;
  }
  std::size_t Draw(std::mt19937_64& rng) const {
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(),
                               Uniform(rng));
    if (it == cumulative_.end()) --it;
    return static_cast<std::size_t>(it - cumulative_.begin());
  }

 private:
  std::vector<double> cumulative_;
};

Categorical Zipf(std::size_t n, double s) {
  std::vector<double> w(n);
  for (std::size_t r = 0; r < n; ++r)
    w[r] = 1.0 / std::pow(static_cast<double>(r + 1), s);
  return Categorical(w);
}

std::string MakePart(const SynthCountry& c, NamePartRole role,
                     std::mt19937_64& rng) {
  const bool first = role == NamePartRole::kFirst;
  const int lo = first ? c.first_min : c.last_min;
  const int hi = first ? c.first_max : c.last_max;
  const int n = lo + static_cast<int>(UniformIndex(rng, hi - lo + 1));
  std::string part;
  for (int i = 0; i < n; ++i) part += c.syllables[UniformIndex(rng, c.syllables.size())];
  const auto& endings = first ? c.first_endings : c.last_endings;
  if (!endings.empty() && Uniform(rng) < c.ending_rate)
    part += endings[UniformIndex(rng, endings.size())];
  return part;
}

std::pair<int, int> ParseRange(const std::string& s, const std::string& key) {
  const std::size_t dash = s.find('-');
  try {
    if (dash == std::string::npos) {
      const int v = std::stoi(s);
      return {v, v};
    }
    return {std::stoi(s.substr(0, dash)), std::stoi(s.substr(dash + 1))};
  } catch (const std::exception&) {
    throw std::invalid_argument("bad range for " + key + ": '" + s + "'");
  }
}

template <typename T>
T ParseNumber(const std::string& s, const std::string& key) {
  std::istringstream in(s);
  T v{};
  if (!(in >> v) || !(in >> std::ws).eof())
    throw std::invalid_argument("bad value for " + key + ": '" + s + "'");
  return v;
}

std::string Join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
  return out;
}

std::vector<double> CountryWeights(const SynthConfig& config) {
  std::vector<double> w;
  for (const SynthCountry& c : config.countries)
    w.push_back(static_cast<double>(c.population) * c.sample_rate);
  return w;
}

}  // namespace

SynthConfig SynthConfig::Parse(std::string_view text) {
  const internal::IniDocument doc = internal::ParseIni(text);
  SynthConfig cfg;
  for (const auto& [key, value] : doc.globals.entries) {
    if (key == "homophily") cfg.homophily = ParseNumber<double>(value, key);
    else if (key == "owners") cfg.owners = ParseNumber<std::uint64_t>(value, key);
    else if (key == "contacts_min") cfg.contacts_min = ParseNumber<int>(value, key);
    else if (key == "contacts_max") cfg.contacts_max = ParseNumber<int>(value, key);
    else if (key == "labels") cfg.labels = ParseNumber<std::uint64_t>(value, key);
    else if (key == "label_noise") cfg.label_noise = ParseNumber<double>(value, key);
    else if (key == "seed") cfg.seed = ParseNumber<std::uint64_t>(value, key);
    else if (key == "first_names") cfg.first_names = ParseNumber<std::size_t>(value, key);
    else if (key == "last_names") cfg.last_names = ParseNumber<std::size_t>(value, key);
    else if (key == "zipf") cfg.zipf = ParseNumber<double>(value, key);
    else throw std::invalid_argument("unknown synth key '" + key + "'");
  }
  for (const internal::IniSection& s : doc.sections) {
    if (!s.name.starts_with("country "))
      throw std::invalid_argument("line " + std::to_string(s.line) +
                                  ": expected [country XX]");
    SynthCountry c;
    c.code = internal::Trim(std::string_view(s.name).substr(8));
    for (const auto& [key, value] : s.entries) {
      if (key == "leaf") c.leaf = value;
      else if (key == "group") c.group = value;
      else if (key == "population") c.population = ParseNumber<std::uint64_t>(value, key);
      else if (key == "sample_rate") c.sample_rate = ParseNumber<double>(value, key);
      else if (key == "syllables") c.syllables = internal::SplitAndTrim(value, ',');
      else if (key == "first_syllables")
        std::tie(c.first_min, c.first_max) = ParseRange(value, key);
      else if (key == "last_syllables")
        std::tie(c.last_min, c.last_max) = ParseRange(value, key);
      else if (key == "first_endings") c.first_endings = internal::SplitAndTrim(value, ',');
      else if (key == "last_endings") c.last_endings = internal::SplitAndTrim(value, ',');
      else if (key == "ending_rate") c.ending_rate = ParseNumber<double>(value, key);
      else throw std::invalid_argument("unknown country key '" + key + "'");
    }
    cfg.countries.push_back(std::move(c));
  }
  cfg.Validate();
  return cfg;
}

SynthConfig SynthConfig::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return Parse(ss.str());
}

SynthConfig SynthConfig::Default() { return Parse(kDefaultConfig); }

std::string SynthConfig::Serialize() const {
  std::ostringstream out;
  out.precision(17);
  out << "homophily = " << homophily << "\nowners = " << owners
      << "\ncontacts_min = " << contacts_min << "\ncontacts_max = "
      << contacts_max << "\nlabels = " << labels << "\nlabel_noise = "
      << label_noise << "\nseed = " << seed << "\nfirst_names = "
      << first_names << "\nlast_names = " << last_names << "\nzipf = " << zipf
      << '\n';
  for (const SynthCountry& c : countries) {
    out << "\n[country " << c.code << "]\nleaf = " << c.leaf
        << "\ngroup = " << c.group << "\npopulation = " << c.population
        << "\nsample_rate = " << c.sample_rate
        << "\nsyllables = " << Join(c.syllables) << "\nfirst_syllables = "
        << c.first_min << '-' << c.first_max << "\nlast_syllables = "
        << c.last_min << '-' << c.last_max << '\n';
    if (!c.first_endings.empty())
      out << "first_endings = " << Join(c.first_endings) << '\n';
    if (!c.last_endings.empty())
      out << "last_endings = " << Join(c.last_endings) << '\n';
    out << "ending_rate = " << c.ending_rate << '\n';
  }
  return out.str();
}

void SynthConfig::Validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument("invalid synth config: " + what);
  };
  require(homophily >= 0.0 && homophily <= 1.0, "homophily");
  require(owners >= 1, "owners");
  require(contacts_min >= 1 && contacts_max >= contacts_min, "contacts range");
  require(labels >= 1, "labels");
  require(label_noise >= 0.0 && label_noise <= 1.0, "label_noise");
  require(first_names >= 1 && last_names >= 1, "inventory sizes");
  require(zipf >= 0.0, "zipf");
  require(countries.size() >= 2, "need at least two countries");
  std::set<std::string> codes, leaves;
  for (const SynthCountry& c : countries) {
    require(c.code.size() == 2 && std::isupper(static_cast<unsigned char>(c.code[0])) &&
                std::isupper(static_cast<unsigned char>(c.code[1])),
            "country code '" + c.code + "'");
    require(codes.insert(c.code).second, "duplicate country " + c.code);
    require(!c.leaf.empty() && leaves.insert(c.leaf).second,
            "leaf of " + c.code);
    require(!c.group.empty(), "group of " + c.code);
    require(c.population >= 1 && c.sample_rate > 0.0, "weights of " + c.code);
    require(!c.syllables.empty(), "syllables of " + c.code);
    require(c.first_min >= 1 && c.first_max >= c.first_min && c.last_min >= 1 &&
                c.last_max >= c.last_min,
            "syllable ranges of " + c.code);
    require(c.ending_rate >= 0.0 && c.ending_rate <= 1.0, "ending_rate of " + c.code);
    for (const auto* list : {&c.syllables, &c.first_endings, &c.last_endings})
      for (const std::string& s : *list)
        require(FoldName(s) == s && SplitOnWhitespace(s).size() == 1,
                "syllable '" + s + "' of " + c.code + " is not normalized");
  }
}

SynthCorpus Generate(const SynthConfig& config) {
  config.Validate();
  const std::size_t C = config.countries.size();
  SynthCorpus corpus;

  // Inventories: unique per role across all countries.
  std::mt19937_64 inv_rng(config.seed);
  std::set<std::string> used[2];
  corpus.first_inventory.resize(C);
  corpus.last_inventory.resize(C);
  for (std::size_t c = 0; c < C; ++c) {
    for (NamePartRole role : kRoles) {
      const int r = role == NamePartRole::kFirst ? 0 : 1;
      auto& inventory = r == 0 ? corpus.first_inventory[c] : corpus.last_inventory[c];
      const std::size_t want = r == 0 ? config.first_names : config.last_names;
      std::size_t attempts = 0;
      while (inventory.size() < want) {
        if (++attempts > want * 1000)
          throw std::invalid_argument("country " + config.countries[c].code +
                                      " cannot produce enough distinct names");
        std::string part = MakePart(config.countries[c], role, inv_rng);
        if (CodePointLength(part) < 2 || !used[r].insert(part).second) continue;
        corpus.part_country[RoleToken(role, part)] = config.countries[c].code;
        inventory.push_back(std::move(part));
      }
    }
  }

  const Categorical country_dist(CountryWeights(config));
  const Categorical first_zipf = Zipf(config.first_names, config.zipf);
  const Categorical last_zipf = Zipf(config.last_names, config.zipf);
  auto draw_name = [&](std::size_t c, std::mt19937_64& rng) {
    FullName n;
    n.first = corpus.first_inventory[c][first_zipf.Draw(rng)];
    n.last = corpus.last_inventory[c][last_zipf.Draw(rng)];
    n.raw = n.first + " " + n.last;
    return n;
  };

  std::mt19937_64 contact_rng(config.seed ^ 0x636f6e7461637473ULL);
  const int width = std::max<int>(6, static_cast<int>(std::to_string(config.owners).size()));
  for (std::uint64_t o = 0; o < config.owners; ++o) {
    ContactList list;
    std::string id = std::to_string(o + 1);
    list.owner = "u" + std::string(width - id.size(), '0') + id;
    ContactTruth truth;
    truth.owner_country = country_dist.Draw(contact_rng);
    const int n = config.contacts_min +
                  static_cast<int>(UniformIndex(
                      contact_rng, config.contacts_max - config.contacts_min + 1));
    for (int i = 0; i < n; ++i) {
      const std::size_t c = Uniform(contact_rng) < config.homophily
                                ? truth.owner_country
                                : UniformIndex(contact_rng, C);
      ContactRecord rec;
      rec.contact = draw_name(c, contact_rng);
      rec.frequency = static_cast<double>(1 + UniformIndex(contact_rng, 50));
      rec.recency_days = static_cast<double>(UniformIndex(contact_rng, 366));
      list.contacts.push_back(std::move(rec));
      truth.contact_countries.push_back(c);
    }
    corpus.contacts.push_back(std::move(list));
    corpus.truth.push_back(std::move(truth));
  }

  std::mt19937_64 label_rng(config.seed ^ 0x6c6162656c730000ULL);
  std::map<std::tuple<std::string, std::string, std::string>, std::uint64_t> agg;
  for (std::uint64_t i = 0; i < config.labels; ++i) {
    const std::size_t c = country_dist.Draw(label_rng);
    const FullName n = draw_name(c, label_rng);
    std::size_t reported = c;
    if (Uniform(label_rng) < config.label_noise) {
      reported = UniformIndex(label_rng, C - 1);
      if (reported >= c) ++reported;
    }
    ++agg[{n.first, n.last, config.countries[reported].code}];
  }
  for (const auto& [key, count] : agg) {
    const auto& [first, last, code] = key;
    corpus.labels.push_back({{first, last, first + " " + last}, code, count});
  }

  std::ostringstream tax;
  tax << "taxonomy = synth\npopulation_year = synthetic\n\n[Root]\n";
  std::vector<std::string> groups;
  for (const SynthCountry& c : config.countries)
    if (std::find(groups.begin(), groups.end(), c.group) == groups.end())
      groups.push_back(c.group);
  for (const std::string& g : groups) {
    tax << "\n[" << g << "]\nparent = Root\n";
    for (const SynthCountry& c : config.countries) {
      if (c.group != g) continue;
      tax << "\n[" << c.leaf << "]\nparent = " << g << "\ncountries = " << c.code
          << "\npopulation = " << c.population << '\n';
    }
  }
  corpus.taxonomy_text = tax.str();
  return corpus;
}

void WriteCorpus(const SynthCorpus& corpus, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    return out;
  };
  {
    std::ofstream out = open("contacts.tsv");
    for (const ContactList& list : corpus.contacts) {
      out << list.owner;
      for (const ContactRecord& r : list.contacts)
        out << '\t' << r.contact.first << ' ' << r.contact.last << ':'
            << static_cast<long long>(r.frequency) << ':'
            << static_cast<long long>(r.recency_days);
      out << '\n';
    }
  }
  {
    std::ofstream out = open("labels.tsv");
    WriteLabeledNames(out, corpus.labels);
  }
  {
    std::ofstream out = open("taxonomy.taxonomy");
    out << corpus.taxonomy_text;
  }
  {
    std::ofstream out = open("parts.tsv");
    for (const auto& [token, code] : corpus.part_country) {
      auto split = SplitRoleToken(token);
      out << RoleName(split->first) << '\t' << split->second << '\t' << code
          << '\n';
    }
  }
}

std::vector<std::string> GenerateNovelParts(const SynthConfig& config,
                                            const SynthCorpus& corpus,
                                            std::size_t country,
                                            NamePartRole role, std::size_t n,
                                            const std::set<std::string>& exclude,
                                            std::uint64_t seed) {
  const SynthCountry& c = config.countries.at(country);
  std::mt19937_64 rng(seed);
  std::vector<std::string> out;
  std::set<std::string> seen;
  std::size_t attempts = 0;
  while (out.size() < n) {
    if (++attempts > (n + 1) * 1000)
      throw std::invalid_argument("cannot generate novel parts for " + c.code);
    std::string part = MakePart(c, role, rng);
    if (CodePointLength(part) < 2 || exclude.contains(part) ||
        corpus.part_country.contains(RoleToken(role, part)) ||
        !seen.insert(part).second)
      continue;
    out.push_back(std::move(part));
  }
  return out;
}

double EmpiricalHomophily(const SynthCorpus& corpus, std::size_t countries) {
  std::uint64_t same = 0, total = 0;
  for (const ContactTruth& t : corpus.truth) {
    for (std::size_t c : t.contact_countries) {
      same += c == t.owner_country;
      ++total;
    }
  }
  if (total == 0 || countries < 2) return 0.0;
  const double rate = static_cast<double>(same) / static_cast<double>(total);
  const double base = 1.0 / static_cast<double>(countries);
  return (rate - base) / (1.0 - base);
}

}  // namespace nameorigin
