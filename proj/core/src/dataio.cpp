#include "addgeo/dataio.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace addgeo {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& what)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

namespace {

struct Word {
  std::string_view text;
  std::size_t column;
};

std::vector<Word> split_words(std::string_view line) {
  std::vector<Word> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    out.push_back({line.substr(i, j - i), i + 1});
    i = j;
  }
  return out;
}

bool is_keyword(std::string_view w) {
  return w == "field" || w == "ambient" || w == "blockdim" || w == "claim" || w == "gen" || w == "elem";
}

class Parser {
 public:
  explicit Parser(std::string_view text) {
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      std::string_view line = text.substr(start, end - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      lines_.push_back(line);
      if (end == text.size()) break;
      start = end + 1;
    }
  }

  Dataset run() {
    Dataset ds;
    bool have_r = false, have_h = false;
    for (cur_ = 0; cur_ < lines_.size();) {
      std::string_view line = lines_[cur_];
      auto words = split_words(line);
      if (words.empty()) {
        ++cur_;
        continue;
      }
      if (words[0].text[0] == '#') {
        std::string_view c = line.substr(line.find('#') + 1);
        if (!c.empty() && c[0] == ' ') c.remove_prefix(1);
        ds.comments.emplace_back(c);
        ++cur_;
        continue;
      }
      const std::string_view kw = words[0].text;
      if (!is_keyword(kw)) fail(words[0].column, "expected a keyword, found '" + std::string(kw) + "'");
      const bool multispread = kw == "claim" && words.size() > 1 && words[1].text == "multispread";
      auto kv = key_values(words, multispread ? 2 : 1);
      if (kw == "field") {
        if (ds.field) fail(1, "duplicate field line");
        auto p = require(kv, "p", words[0]);
        auto l = require(kv, "l", words[0]);
        check_keys(kv, {"p", "l"});
        try {
          ds.field = Field::get(static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(l));
        } catch (const Error& e) {
          fail(words[0].column, e.what());
        }
        ++cur_;
      } else if (kw == "ambient") {
        ds.r = require(kv, "r", words[0]);
        check_keys(kv, {"r"});
        if (ds.r == 0) fail(words[0].column, "ambient dimension must be positive");
        have_r = true;
        ++cur_;
      } else if (kw == "blockdim") {
        ds.h = require(kv, "h", words[0]);
        check_keys(kv, {"h"});
        have_h = true;
        ++cur_;
      } else if (kw == "claim") {
        if (multispread) {
          ds.claims.ms_lambda = require(kv, "lambda", words[0]);
          ds.claims.ms_mu = require(kv, "mu", words[0]);
          check_keys(kv, {"lambda", "mu"});
        } else {
          check_keys(kv, {"n", "s", "mu", "faithful"});
          if (auto it = kv.find("n"); it != kv.end()) ds.claims.n = it->second.value;
          if (auto it = kv.find("s"); it != kv.end()) ds.claims.s = it->second.value;
          if (auto it = kv.find("mu"); it != kv.end()) ds.claims.mu = it->second.value;
          if (auto it = kv.find("faithful"); it != kv.end()) {
            if (it->second.value > 1) fail(it->second.column, "faithful must be 0 or 1");
            ds.claims.faithful = it->second.value == 1;
          }
        }
        ++cur_;
      } else if (kw == "gen") {
        need_header(ds, have_r, words[0]);
        GeneratorSpec g;
        g.frob = static_cast<std::uint32_t>(require(kv, "frob", words[0]));
        check_keys(kv, {"frob"});
        if (g.frob >= ds.field->l()) fail(words[0].column, "frob exponent must be below l=" + std::to_string(ds.field->l()));
        const std::size_t at = cur_++;
        g.mat = read_rows(ds, ds.r);
        if (g.mat.rows() != ds.r)
          throw ParseError(at + 1, 1, "generator needs " + std::to_string(ds.r) + " rows, found " +
                                          std::to_string(g.mat.rows()));
        ds.generators.push_back(std::move(g));
      } else {  // elem
        need_header(ds, have_r, words[0]);
        DatasetEntry e;
        if (auto it = kv.find("orbit"); it != kv.end()) {
          if (it->second.value == 0) fail(it->second.column, "orbit size must be positive");
          e.orbit = it->second.value;
        }
        check_keys(kv, {"orbit"});
        ++cur_;
        e.rows = read_rows(ds, std::string::npos);
        ds.entries.push_back(std::move(e));
      }
    }
    if (!ds.field) throw ParseError(lines_.size(), 1, "missing field line");
    if (!have_r) throw ParseError(lines_.size(), 1, "missing ambient line");
    if (!have_h) throw ParseError(lines_.size(), 1, "missing blockdim line");
    return ds;
  }

 private:
  struct Value {
    std::uint64_t value;
    std::size_t column;
  };

  [[noreturn]] void fail(std::size_t column, const std::string& what) const {
    throw ParseError(cur_ + 1, column, what);
  }

  std::map<std::string, Value, std::less<>> key_values(const std::vector<Word>& words, std::size_t from) const {
    std::map<std::string, Value, std::less<>> out;
    for (std::size_t i = from; i < words.size(); ++i) {
      auto w = words[i].text;
      auto eq = w.find('=');
      if (eq == std::string_view::npos || eq == 0) fail(words[i].column, "expected key=value, found '" + std::string(w) + "'");
      std::uint64_t v = 0;
      auto vs = w.substr(eq + 1);
      auto [ptr, ec] = std::from_chars(vs.data(), vs.data() + vs.size(), v);
      if (ec != std::errc() || ptr != vs.data() + vs.size() || vs.empty())
        fail(words[i].column + eq + 1, "expected a non-negative integer, found '" + std::string(vs) + "'");
      if (!out.emplace(std::string(w.substr(0, eq)), Value{v, words[i].column}).second)
        fail(words[i].column, "duplicate key '" + std::string(w.substr(0, eq)) + "'");
    }
    return out;
  }

  std::uint64_t require(const std::map<std::string, Value, std::less<>>& kv, const char* key, const Word& at) const {
    auto it = kv.find(key);
    if (it == kv.end()) fail(at.column, std::string("missing ") + key + "=");
    return it->second.value;
  }

  void check_keys(const std::map<std::string, Value, std::less<>>& kv, std::initializer_list<std::string_view> allowed) const {
    for (const auto& [k, v] : kv) {
      bool ok = false;
      for (auto a : allowed) ok = ok || a == k;
      if (!ok) fail(v.column, "unknown key '" + k + "'");
    }
  }

  void need_header(const Dataset& ds, bool have_r, const Word& at) const {
    if (!ds.field) fail(at.column, "field line must come first");
    if (!have_r) fail(at.column, "ambient line must precede generators and elements");
  }

  // Rows of tokens up to the next keyword line (or max_rows rows).
  Matrix read_rows(const Dataset& ds, std::size_t max_rows) {
    std::vector<std::vector<Elem>> rows;
    while (cur_ < lines_.size() && rows.size() < max_rows) {
      auto words = split_words(lines_[cur_]);
      if (words.empty()) {
        ++cur_;
        continue;
      }
      if (words[0].text[0] == '#' || is_keyword(words[0].text)) break;
      if (words.size() != ds.r)
        fail(words.size() > ds.r ? words[ds.r].column : lines_[cur_].size() + 1,
             "row has " + std::to_string(words.size()) + " entries, expected " + std::to_string(ds.r));
      std::vector<Elem> row;
      for (const auto& w : words) {
        try {
          row.push_back(ds.field->parse_token(w.text));
        } catch (const Error&) {
          fail(w.column, "unknown element symbol '" + std::string(w.text) + "' for GF(" +
                             std::to_string(ds.field->q()) + ")");
        }
      }
      rows.push_back(std::move(row));
      ++cur_;
    }
    return Matrix::from_rows(ds.field, ds.r, rows);
  }

  std::vector<std::string_view> lines_;
  std::size_t cur_ = 0;
};

void write_rows(std::ostringstream& out, const Field& f, const Matrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << f.token(m(i, j));
    }
    out << '\n';
  }
}

std::string tokens(const Field& f, std::span<const Elem> v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ' ';
    s += f.token(v[i]);
  }
  return s;
}

std::string describe_rows(const Field& f, const Matrix& m) {
  std::string s;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (i) s += " / ";
    s += tokens(f, m.row(i));
  }
  return s;
}

}  // namespace

Dataset parse(std::string_view text) { return Parser(text).run(); }

Dataset load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string serialize(const Dataset& ds) {
  std::ostringstream out;
  for (const auto& c : ds.comments) {
    out << '#';
    if (!c.empty()) out << ' ' << c;
    out << '\n';
  }
  out << "field p=" << ds.field->p() << " l=" << ds.field->l() << '\n';
  out << "ambient r=" << ds.r << '\n';
  out << "blockdim h=" << ds.h << '\n';
  const Claims& c = ds.claims;
  if (c.n || c.s || c.mu || c.faithful) {
    out << "claim";
    if (c.n) out << " n=" << *c.n;
    if (c.s) out << " s=" << *c.s;
    if (c.mu) out << " mu=" << *c.mu;
    if (c.faithful) out << " faithful=" << (*c.faithful ? 1 : 0);
    out << '\n';
  }
  if (c.ms_lambda && c.ms_mu) out << "claim multispread lambda=" << *c.ms_lambda << " mu=" << *c.ms_mu << '\n';
  for (const auto& g : ds.generators) {
    out << "gen frob=" << g.frob << '\n';
    write_rows(out, *ds.field, g.mat);
  }
  for (const auto& e : ds.entries) {
    out << "elem";
    if (e.orbit) out << " orbit=" << *e.orbit;
    out << '\n';
    write_rows(out, *ds.field, e.rows);
  }
  return out.str();
}

Dataset dataset_from_system(const ProjSystem& sys, std::vector<std::string> comments) {
  Dataset ds;
  ds.comments = std::move(comments);
  ds.field = sys.field();
  ds.r = sys.r();
  ds.h = sys.h();
  auto rep = verify(sys);
  ds.claims.n = rep.n;
  ds.claims.s = rep.s;
  ds.claims.mu = rep.mu;
  ds.claims.faithful = rep.faithful;
  for (const auto& e : sys.elements()) ds.entries.push_back({e.basis(), std::nullopt});
  return ds;
}

Group dataset_group(const Dataset& ds, ActionConvention c) {
  std::vector<SemilinearMap> gens;
  for (const auto& g : ds.generators) gens.push_back(adapt(SemilinearMap(g.mat, g.frob), c));
  if (gens.empty()) return Group(ds.field, ds.r);
  return Group(ds.field, ds.r, std::move(gens));
}

ProjSystem expand_dataset(const Dataset& ds, ActionConvention c) {
  Group g = dataset_group(ds, c);
  OrbitListing listing;
  for (const auto& e : ds.entries) listing.entries.push_back({Subspace(e.rows), e.orbit});
  return expand_listing(g, listing, ds.h, true);
}

std::string digest(std::string_view text) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char ch : text) {
    hash ^= ch;
    hash *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string Certificate::first_failure() const {
  if (!error.empty()) return error;
  for (const auto& c : claims)
    if (!c.pass) {
      std::string s = c.name + ": claimed " + c.claimed + ", found " + c.actual;
      if (!c.witness.empty()) s += " (" + c.witness + ")";
      return s;
    }
  return {};
}

Certificate certify(const Dataset& ds) {
  Certificate cert;
  cert.digest = digest(serialize(ds));
  std::optional<ProjSystem> sys;
  std::optional<Group> group;
  for (auto conv : all_conventions()) {
    try {
      group = dataset_group(ds, conv);
      OrbitListing listing;
      for (const auto& e : ds.entries) listing.entries.push_back({Subspace(e.rows), e.orbit});
      sys = expand_listing(*group, listing, ds.h, true);
      cert.convention = to_string(conv);
      break;
    } catch (const Error& e) {
      cert.convention_errors.push_back(to_string(conv) + ": " + e.what());
      group.reset();
      if (ds.generators.empty()) break;  // conventions only matter for generators
    }
  }
  if (!sys) {
    cert.error = "listing expansion failed: " + cert.convention_errors.front();
    return cert;
  }
  cert.group_order = group->order();
  const Field& f = *ds.field;
  auto rep = verify(*sys);
  auto ps = ProjectiveSpace::get(ds.field, ds.r);
  auto add = [&](std::string name, std::uint64_t claimed, std::uint64_t actual, std::string witness) {
    cert.claims.push_back({std::move(name), claimed == actual, std::to_string(claimed), std::to_string(actual),
                           claimed == actual ? std::string() : std::move(witness)});
  };
  const Claims& c = ds.claims;
  if (c.n) add("n", *c.n, rep.n, {});
  if (c.s) {
    // The maximum on the witness hyperplane exceeds the claim, or no
    // hyperplane reaches it.
    add("s", *c.s, rep.s, "hyperplane " + std::to_string(rep.s_witness) + " normal (" +
                              tokens(f, ps->point(rep.s_witness)) + ") holds " + std::to_string(rep.s));
  }
  if (c.mu) add("mu", *c.mu, rep.mu, "point (" + tokens(f, ps->point(rep.mu_witness)) + ")");
  if (c.faithful) {
    std::size_t bad = 0;
    while (bad < sys->n() && sys->elements()[bad].dim() == ds.h) ++bad;
    cert.claims.push_back({"faithful", *c.faithful == rep.faithful, *c.faithful ? "1" : "0", rep.faithful ? "1" : "0",
                           bad < sys->n() ? "element " + std::to_string(bad) + " has dimension " +
                                                std::to_string(sys->elements()[bad].dim())
                                          : std::string()});
  }
  if (c.ms_lambda || c.ms_mu) {
    auto ms = multispread_check(*sys, ds.h, rep);
    cert.multispread = ms;
    std::string witness = ms.failure;
    if (!ms.failure.empty() && ms.witness_point < ps->size())
      witness = "point (" + tokens(f, ps->point(ms.witness_point)) + "): " + ms.failure;
    cert.claims.push_back({"multispread", ms.valid, "valid", ms.valid ? "valid" : "invalid", ms.valid ? "" : witness});
    if (c.ms_lambda) add("lambda", *c.ms_lambda, ms.lambda, {});
    if (c.ms_mu) add("multispread-mu", *c.ms_mu, ms.mu, witness);
    // Every hyperplane holds the same number of elements.
    cert.claims.push_back({"constant-s", rep.s == rep.s_min, std::to_string(rep.s),
                           std::to_string(rep.s_min) + ".." + std::to_string(rep.s), {}});
  }
  auto inv = stabilizer_invariance_check(*group, *sys);
  cert.claims.push_back({"group-invariant", inv.invariant, "1", inv.invariant ? "1" : "0",
                         inv.invariant ? std::string()
                                       : "generator " + std::to_string(inv.generator) + " moves element " +
                                             describe_rows(f, sys->elements()[inv.element].basis())});
  cert.report = std::move(rep);
  cert.pass = true;
  for (const auto& cl : cert.claims) cert.pass = cert.pass && cl.pass;
  return cert;
}

std::string to_records(const Certificate& cert, const std::string& label) {
  std::ostringstream out;
  out << "file=" << label << " status=" << (cert.pass ? "pass" : "fail") << " digest=" << cert.digest;
  if (!cert.convention.empty()) out << " convention=" << cert.convention << " group_order=" << cert.group_order;
  if (cert.report) {
    out << " n=" << cert.report->n << " s=" << cert.report->s << " s_min=" << cert.report->s_min
        << " mu=" << cert.report->mu << " faithful=" << (cert.report->faithful ? 1 : 0);
  }
  if (cert.multispread && cert.multispread->valid)
    out << " lambda=" << cert.multispread->lambda << " ms_mu=" << cert.multispread->mu;
  out << '\n';
  for (const auto& c : cert.claims) {
    out << "file=" << label << " claim=" << c.name << " status=" << (c.pass ? "pass" : "fail") << " claimed=" << c.claimed
        << " actual=" << c.actual;
    if (!c.witness.empty()) out << " witness=\"" << c.witness << '"';
    out << '\n';
  }
  if (!cert.error.empty()) out << "file=" << label << " error=\"" << cert.error << "\"\n";
  return out.str();
}

}  // namespace addgeo
