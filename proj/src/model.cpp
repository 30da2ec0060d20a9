// Copyright 2026 The varjet Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "varjet/model.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "varjet/error.hpp"
#include "varjet/parser.hpp"

namespace varjet {

const DynamicalForm& Model::form(const std::string& name) const {
  auto it = forms.find(name);
  if (it == forms.end()) throw FormatError("model has no form named '" + name + "'");
  return it->second;
}

const LagrangianDef& Model::lagrangian(const std::string& name) const {
  auto it = lagrangians.find(name);
  if (it == lagrangians.end())
    throw FormatError("model has no lagrangian named '" + name + "'");
  return it->second;
}

ConstantMap Model::fixed_constants() const {
  ConstantMap out;
  for (const auto& [name, value] : constants)
    if (value) out[name] = *value;
  return out;
}

std::vector<std::string> Model::free_constants() const {
  std::vector<std::string> out;
  for (const auto& [name, value] : constants)
    if (!value) out.push_back(name);
  return out;
}

JetChart Model::chart_of(ChartKind kind) const {
  return kind == chart.kind ? chart : chart.companion();
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
  int column = 0;
};

struct Section {
  std::string kind;
  std::string name;
  std::string tag;
  int line = 0;
  std::vector<Entry> entries;
};

int parse_int(const std::string& s, const std::string& where) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    throw FormatError(where + ": expected an integer, got '" + s + "'");
  }
  if (used != s.size()) throw FormatError(where + ": expected an integer, got '" + s + "'");
  return v;
}

double parse_real(const std::string& s, const std::string& where) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw FormatError(where + ": expected a number, got '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v))
    throw FormatError(where + ": expected a number, got '" + s + "'");
  return v;
}

std::string real_text(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Model parse_model(const std::string& text, const std::string& source) {
  std::vector<Section> sections;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  auto where = [&](int line) { return source + ":" + std::to_string(line); };
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw.substr(0, raw.find('#'));
    std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw FormatError(where(lineno) + ": malformed section header");
      std::istringstream words(t.substr(1, t.size() - 2));
      Section s;
      s.line = lineno;
      words >> s.kind >> s.name >> s.tag;
      std::string extra;
      if (words >> extra) throw FormatError(where(lineno) + ": malformed section header");
      sections.push_back(s);
      continue;
    }
    if (sections.empty()) throw FormatError(where(lineno) + ": entry outside a section");
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw FormatError(where(lineno) + ": expected key = value");
    Entry e;
    e.key = trim(line.substr(0, eq));
    e.value = trim(line.substr(eq + 1));
    e.line = lineno;
    std::size_t vstart = line.find_first_not_of(" \t", eq + 1);
    e.column = static_cast<int>(vstart == std::string::npos ? eq + 1 : vstart) + 1;
    if (e.key.empty() || e.value.empty())
      throw FormatError(where(lineno) + ": expected key = value");
    for (const Entry& prev : sections.back().entries)
      if (prev.key == e.key) throw FormatError(where(lineno) + ": duplicate key '" + e.key + "'");
    sections.back().entries.push_back(e);
  }

  Model m;
  const Section* header = nullptr;
  std::set<std::string> names;
  for (const Section& s : sections) {
    if (s.kind == "model" || s.kind == "constants") {
      if (!s.name.empty()) throw FormatError(where(s.line) + ": unexpected section name");
      for (const Section& o : sections)
        if (&o != &s && o.kind == s.kind)
          throw FormatError(where(o.line) + ": duplicate section [" + s.kind + "]");
      if (s.kind == "model") header = &s;
    } else if (s.kind == "lagrangian" || s.kind == "form") {
      if (s.name.empty()) throw FormatError(where(s.line) + ": section needs a name");
      if (!names.insert(s.name).second)
        throw FormatError(where(s.line) + ": duplicate section name '" + s.name + "'");
      if (!s.tag.empty() && s.tag != "parametric" && s.tag != "homogeneous")
        throw FormatError(where(s.line) + ": unknown chart tag '" + s.tag + "'");
    } else {
      throw FormatError(where(s.line) + ": unknown section [" + s.kind + "]");
    }
  }
  if (!header) throw FormatError(source + ": missing [model] section");

  std::optional<ChartKind> kind;
  std::optional<int> dim, order, orientation;
  std::optional<std::string> signature;
  for (const Entry& e : header->entries) {
    std::string w = where(e.line);
    if (e.key == "chart") {
      if (e.value == "parametric") kind = ChartKind::parametric;
      else if (e.value == "homogeneous") kind = ChartKind::homogeneous;
      else throw FormatError(w + ": chart must be parametric or homogeneous");
    } else if (e.key == "dim") {
      dim = parse_int(e.value, w);
    } else if (e.key == "order") {
      order = parse_int(e.value, w);
    } else if (e.key == "signature") {
      signature = e.value;
    } else if (e.key == "orientation") {
      orientation = parse_int(e.value, w);
    } else {
      throw FormatError(w + ": unknown key '" + e.key + "' in [model]");
    }
  }
  if (!kind || !dim || !order)
    throw FormatError(where(header->line) + ": [model] needs chart, dim and order");
  try {
    m.chart = JetChart(*kind, *dim, *order);
    std::string sig = signature ? *signature : Metric::minkowski(*dim + 1).signature();
    if (static_cast<int>(sig.size()) != *dim + 1)
      throw FormatError("signature needs " + std::to_string(*dim + 1) + " signs");
    m.metric = Metric::parse_signature(sig, orientation.value_or(1));
  } catch (const Error& err) {
    throw FormatError(where(header->line) + ": " + err.what());
  }

  std::set<std::string> declared;
  for (const Section& s : sections) {
    if (s.kind != "constants") continue;
    for (const Entry& e : s.entries) {
      if (e.value == "free") m.constants[e.key] = std::nullopt;
      else m.constants[e.key] = parse_real(e.value, where(e.line));
      declared.insert(e.key);
    }
  }

  auto parse_in = [&](const Entry& e, const JetChart& chart) {
    ParseOptions opt;
    opt.constants = &declared;
    opt.line = e.line;
    opt.column = e.column;
    try {
      return parse_expression(e.value, chart, opt);
    } catch (const ParseError& err) {
      std::string msg = err.what();
      msg = msg.substr(msg.find(": ") + 2);
      throw ParseError(source, msg, err.line(), err.column());
    }
  };

  for (const Section& s : sections) {
    if (s.kind != "lagrangian" && s.kind != "form") continue;
    ChartKind k = s.tag.empty() ? m.chart.kind
                : s.tag == "parametric" ? ChartKind::parametric : ChartKind::homogeneous;
    JetChart chart = m.chart_of(k);
    if (s.kind == "lagrangian") {
      if (s.entries.size() != 1 || s.entries[0].key != "L")
        throw FormatError(where(s.line) + ": [lagrangian " + s.name + "] needs exactly one key L");
      m.lagrangians[s.name] = LagrangianDef(chart, parse_in(s.entries[0], chart));
      continue;
    }
    ExprVector comps(static_cast<std::size_t>(chart.dim()));
    std::vector<bool> seen(comps.size(), false);
    for (const Entry& e : s.entries) {
      int idx = -1;
      if (e.key.size() > 1 && e.key[0] == 'E') {
        try {
          idx = parse_int(e.key.substr(1), where(e.line));
        } catch (const FormatError&) {
          idx = -1;
        }
      }
      if (idx < 0) throw FormatError(where(e.line) + ": unknown key '" + e.key + "' in form");
      int slot = idx - chart.first_index();
      if (slot < 0 || slot >= chart.dim())
        throw ArityError(where(e.line) + ": component " + e.key + " outside a " +
                         to_string(chart.kind) + " chart of dimension " +
                         std::to_string(chart.n));
      comps[static_cast<std::size_t>(slot)] = parse_in(e, chart);
      seen[static_cast<std::size_t>(slot)] = true;
    }
    int count = 0;
    for (bool b : seen) count += b ? 1 : 0;
    if (count != chart.dim())
      throw ArityError(where(s.line) + ": form " + s.name + " has " + std::to_string(count) +
                       " components, the chart needs " + std::to_string(chart.dim()));
    m.forms[s.name] = DynamicalForm(chart, comps);
  }
  return m;
}

Model load_model(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw FormatError("cannot open model file '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_model(buf.str(), path);
}

std::string save_model(const Model& m) {
  std::ostringstream out;
  out << "[model]\n"
      << "chart = " << to_string(m.chart.kind) << "\n"
      << "dim = " << m.chart.n << "\n"
      << "order = " << m.chart.order << "\n"
      << "signature = " << m.metric.signature() << "\n";
  if (m.metric.orientation() != 1) out << "orientation = " << m.metric.orientation() << "\n";
  if (!m.constants.empty()) {
    out << "\n[constants]\n";
    for (const auto& [name, value] : m.constants)
      out << name << " = " << (value ? real_text(*value) : "free") << "\n";
  }
  auto tag = [&](const JetChart& c) {
    return c.kind == m.chart.kind ? std::string() : std::string(" ") + to_string(c.kind);
  };
  for (const auto& [name, l] : m.lagrangians)
    out << "\n[lagrangian " << name << tag(l.chart) << "]\nL = " << render_expression(l.expr)
        << "\n";
  for (const auto& [name, f] : m.forms) {
    out << "\n[form " << name << tag(f.chart()) << "]\n";
    for (int k = 0; k < f.size(); ++k)
      out << "E" << f.chart().first_index() + k << " = " << render_expression(f[k]) << "\n";
  }
  return out.str();
}

void save_model(const Model& m, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw FormatError("cannot write model file '" + path + "'");
  f << save_model(m);
}

}  // namespace varjet
