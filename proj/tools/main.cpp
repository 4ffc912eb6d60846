#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "addgeo/bounds.hpp"
#include "addgeo/constructions.hpp"
#include "addgeo/dataio.hpp"
#include "addgeo/search.hpp"

using namespace addgeo;
namespace fs = std::filesystem;

namespace {

void write_or_print(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw Error("cannot write " + out);
  f << text;
  std::cout << "wrote=" << out << "\n";
}

void print_report(const ProjSystem& sys) {
  auto rep = verify(sys);
  std::cout << "n=" << rep.n << " r=" << sys.r() << " h=" << sys.h() << " s=" << rep.s << " s_min=" << rep.s_min
            << " mu=" << rep.mu << " faithful=" << rep.faithful << "\n";
}

int cmd_verify(const std::string& file) {
  auto cert = certify(load_dataset(file));
  std::cout << to_records(cert, fs::path(file).filename().string());
  for (const auto& e : cert.convention_errors) std::cout << "# " << e << "\n";
  return cert.pass ? 0 : 1;
}

int cmd_certify_all(const std::string& dir, unsigned jobs, bool recursive) {
  std::vector<fs::path> files;
  auto take = [&](const fs::directory_entry& e) {
    if (e.is_regular_file() && e.path().extension() == ".psys") files.push_back(e.path());
  };
  if (recursive)
    for (const auto& e : fs::recursive_directory_iterator(dir)) take(e);
  else
    for (const auto& e : fs::directory_iterator(dir)) take(e);
  std::sort(files.begin(), files.end());

  std::vector<std::string> out(files.size());
  std::vector<char> ok(files.size(), 0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < files.size();) {
      const std::string label = fs::relative(files[i], dir).string();
      try {
        auto cert = certify(load_dataset(files[i].string()));
        out[i] = to_records(cert, label);
        for (const auto& e : cert.convention_errors) out[i] += "# " + e + "\n";
        ok[i] = cert.pass;
      } catch (const Error& e) {
        out[i] = "file=" + label + " status=fail error=" + e.what() + "\n";
      }
    }
  };
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::size_t pass = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    std::cout << out[i];
    pass += ok[i];
  }
  std::cout << "summary files=" << files.size() << " pass=" << pass << " fail=" << files.size() - pass << "\n";
  return pass == files.size() ? 0 : 1;
}

int cmd_bound(const std::string& op, const std::vector<std::uint64_t>& a) {
  auto need = [&](std::size_t k, const char* usage) {
    if (a.size() != k) throw Error("usage: bound " + op + " " + usage);
  };
  auto show = [](const BoundResult& b) {
    std::cout << "value=" << (b.unbounded ? std::string("inf") : std::to_string(b.value)) << " kind=" << to_string(b.kind)
              << " source=" << b.source << "\n";
  };
  if (op == "gauss") {
    need(2, "q t");
    std::cout << "value=" << gauss_count(a[0], a[1]) << "\n";
  } else if (op == "griesmer") {
    need(3, "q k d");
    std::cout << "value=" << griesmer(a[0], a[1], a[2]) << "\n";
  } else if (op == "additive-griesmer") {
    need(4, "q r h d");
    std::cout << "value=" << additive_griesmer_min_n(a[0], a[1], a[2], a[3]) << "\n";
  } else if (op == "griesmer-max") {
    need(4, "q r h s");
    show(griesmer_max_n(a[0], a[1], a[2], a[3]));
  } else if (op == "projection") {
    need(5, "q h j s t");
    show(projection_bound(a[0], a[1], a[2], a[3], a[4]));
  } else if (op == "projection-refined") {
    need(6, "q h j s t i");
    show(projection_bound_refined(a[0], a[1], a[2], a[3], a[4], a[5]));
  } else if (op == "two-weight") {
    need(4, "q h j s");
    if (auto b = two_weight_bound(a[0], a[1], a[2], a[3]))
      show(*b);
    else
      std::cout << "value=none\n";
  } else if (op == "coding") {
    need(4, "q r h s");
    show(coding_bound(a[0], a[1], a[2], a[3]));
  } else if (op == "best") {
    need(4, "q r h s");
    show(best_upper_bound(a[0], a[1], a[2], a[3]));
  } else {
    throw Error("unknown bound '" + op +
                "' (gauss, griesmer, additive-griesmer, griesmer-max, projection, projection-refined, two-weight, "
                "coding, best)");
  }
  return 0;
}

struct ConstructArgs {
  std::string name, out;
  std::uint32_t q = 0;
  std::size_t h = 2, s = 2;
  std::uint32_t z = 0, zp = 0;
  std::vector<std::size_t> extra{0, 1};
};

int cmd_construct(const ConstructArgs& c) {
  if (c.q == 0) throw Error("--q is required");
  ProjSystem sys = [&] {
    if (c.name == "oval") return construct_oval_system(Field::of_order(c.q), c.h);
    if (c.name == "rs") return construct_rs_system(Field::of_order(c.q), c.h, c.s);
    if (c.name == "orbit") return construct_orbit_system(c.q, c.z, c.zp, c.extra);
    if (c.name == "spread") {
      auto small = Field::of_order(c.q);
      return line_spread(small, Field::get(small->p(), 2 * small->l()));
    }
    throw Error("unknown construction '" + c.name + "' (oval, rs, orbit, spread)");
  }();
  auto ds = dataset_from_system(sys, {"constructed by: construct " + c.name + " q=" + std::to_string(c.q)});
  if (c.name == "orbit") {
    auto [a, b] = orbit_generators(c.q);
    ds.generators = {{0, a.matrix()}, {0, b.matrix()}};
  }
  if (!c.out.empty()) print_report(sys);
  write_or_print(serialize(ds), c.out);
  return 0;
}

struct SearchArgs {
  std::uint32_t q = 0;
  std::size_t r = 0, h = 0;
  std::uint64_t s = 0;
  std::string group, out;
  bool faithful = false;
  std::uint32_t mu = 0, mult = 0;
  double budget = 60;
  std::uint64_t nodes = 0, target = 0, warm = 0, seed = 1;
};

int cmd_search(const SearchArgs& a) {
  SearchProblem p;
  p.field = Field::of_order(a.q);
  p.r = a.r;
  p.h = a.h;
  p.s = a.s;
  p.faithful_only = a.faithful;
  if (a.mu) p.mu_cap = a.mu;
  p.max_multiplicity = a.mult;
  p.time_limit = a.budget;
  p.node_limit = a.nodes;
  if (a.target) p.target = a.target;
  p.warm_start_iterations = a.warm;
  p.rng_seed = a.seed;
  std::vector<GeneratorSpec> gens;
  if (!a.group.empty()) {
    auto gds = load_dataset(a.group);
    if (gds.field.get() != p.field.get() || gds.r != a.r) throw Error("group file has a different field or ambient dimension");
    p.group = dataset_group(gds);
    gens = gds.generators;
  }
  auto out = search_max(p);
  std::cout << "n_best=" << out.n_best << " exhaustive=" << out.exhaustive << " target_reached=" << out.target_reached
            << " nodes=" << out.nodes << " elapsed=" << out.elapsed << " upper_cap=" << out.upper_cap << "\n";
  if (!out.best.n()) return 0;
  print_report(out.best);
  auto ds = dataset_from_system(out.best, {"search result, exhaustive=" + std::to_string(out.exhaustive)});
  ds.generators = gens;
  if (!a.out.empty()) write_or_print(serialize(ds), a.out);
  return 0;
}

int cmd_expand(const std::string& file) {
  auto ds = load_dataset(file);
  auto sys = expand_dataset(ds);
  auto pm = expand_points(sys);
  auto wd = weight_distribution(pm);
  const std::uint64_t delta = qpow(ds.field->q(), ds.h - 1);
  std::cout << "n=" << sys.n() << " points=" << wd.length << " max_on_hyperplane=" << wd.max_on_hyperplane
            << " min_weight=" << wd.min_weight << " max_weight=" << wd.max_weight << " divisor=" << delta
            << " divisible=" << divisibility_check(pm, delta) << "\n";
  for (const auto& [w, count] : wd.counts) std::cout << "weight=" << w << " count=" << count << "\n";
  return 0;
}

int cmd_multispread(const std::string& file, std::uint64_t complete_mu, std::size_t complete_h, double budget,
                    const std::string& out) {
  auto ds = load_dataset(file);
  auto sys = expand_dataset(ds);
  if (complete_mu) {
    CoverProblem c{sys, complete_h ? complete_h : ds.h + 1, complete_mu};
    c.time_limit = budget;
    auto res = complete_multispread(c);
    std::cout << "found=" << res.found << " exhaustive=" << res.exhaustive << " added=" << res.added
              << " nodes=" << res.nodes << " elapsed=" << res.elapsed << "\n";
    if (!res.found) return 1;
    sys = res.result;
    if (!out.empty()) write_or_print(serialize(dataset_from_system(sys, {"completed multispread"})), out);
  }
  auto ms = multispread_check(sys, sys.h());
  std::cout << "valid=" << ms.valid << " n=" << sys.n() << " k=" << ms.k << " h=" << sys.h() << " lambda=" << ms.lambda
            << " mu=" << ms.mu << " s=" << ms.s << " s_equation=" << ms.equation_s_holds
            << " lambda_equation=" << ms.equation_lambda_holds << " congruence=" << ms.congruence_holds;
  if (!ms.failure.empty()) std::cout << " failure=\"" << ms.failure << "\"";
  std::cout << "\n";
  return ms.valid ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projective systems, additive codes and multispreads"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");  // -h is taken by --h below

  std::string file, dir;
  auto* verify_cmd = app.add_subcommand("verify", "certify one dataset");
  verify_cmd->add_option("file", file)->required();

  unsigned jobs = 0;
  bool recursive = false;
  auto* all = app.add_subcommand("certify-all", "certify every .psys file in a directory; exit 0 iff all pass");
  all->add_option("dir", dir)->required();
  all->add_option("-j,--jobs", jobs, "worker threads (0 = hardware)");
  all->add_flag("-r,--recursive", recursive);

  std::string op;
  std::vector<std::uint64_t> params;
  auto* bound = app.add_subcommand("bound", "evaluate a bound");
  bound->add_option("op", op)->required();
  bound->add_option("params", params);

  ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "build a system and print it as a dataset");
  construct->add_option("name", ca.name, "oval, rs, orbit or spread")->required();
  construct->add_option("--q", ca.q)->required();
  construct->add_option("--h", ca.h);
  construct->add_option("--s", ca.s);
  construct->add_option("--z", ca.z);
  construct->add_option("--zp", ca.zp);
  construct->add_option("--extra", ca.extra, "invariant line indices (orbit)");
  construct->add_option("--out", ca.out);

  SearchArgs sa;
  auto* search = app.add_subcommand("search", "maximise n for an h-(n,r,s)_q system");
  search->add_option("--q", sa.q)->required();
  search->add_option("--r", sa.r)->required();
  search->add_option("--h", sa.h)->required();
  search->add_option("--s", sa.s)->required();
  search->add_option("--group", sa.group, "dataset whose generators are prescribed");
  search->add_flag("--faithful", sa.faithful);
  search->add_option("--mu", sa.mu, "point multiplicity cap");
  search->add_option("--max-mult", sa.mult, "element multiplicity cap");
  search->add_option("--budget", sa.budget, "seconds");
  search->add_option("--nodes", sa.nodes);
  search->add_option("--target", sa.target, "stop once n reaches this");
  search->add_option("--warm-start", sa.warm, "tabu iterations before branch and bound");
  search->add_option("--seed", sa.seed);
  search->add_option("--out", sa.out, "write the best system as a dataset");

  auto* expand = app.add_subcommand("expand", "point expansion and weight distribution");
  expand->add_option("file", file)->required();

  std::uint64_t cmu = 0;
  std::size_t ch = 0;
  double cbudget = 300;
  std::string cout_file;
  auto* ms = app.add_subcommand("multispread", "check (and optionally complete) a multispread");
  ms->add_option("file", file)->required();
  ms->add_option("--complete-mu", cmu, "add spaces until every point has this coverage");
  ms->add_option("--complete-h", ch, "dimension of the added spaces (default h+1)");
  ms->add_option("--budget", cbudget, "seconds");
  ms->add_option("--out", cout_file);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*verify_cmd) return cmd_verify(file);
    if (*all) return cmd_certify_all(dir, jobs, recursive);
    if (*bound) return cmd_bound(op, params);
    if (*construct) return cmd_construct(ca);
    if (*search) return cmd_search(sa);
    if (*expand) return cmd_expand(file);
    if (*ms) return cmd_multispread(file, cmu, ch, cbudget, cout_file);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
