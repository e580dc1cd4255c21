#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hfock/experiments.hpp"
#include "hfock/kernel.hpp"
#include "hfock/poly.hpp"
#include "hfock/projector.hpp"

using namespace hfock;

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double parse_real(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw UsageError("not a number: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

Point parse_point(const std::string& s, int n) {
  Point p;
  for (const auto& t : split(s, ',')) p.push_back(parse_real(t));
  if (static_cast<int>(p.size()) != n)
    throw UsageError("point '" + s + "' has " + std::to_string(p.size()) + " coordinates, expected " + std::to_string(n));
  return p;
}

/// `lo:hi:count` or a comma list.
std::vector<double> parse_grid(const std::string& s, bool geometric) {
  if (s.find(':') != std::string::npos) {
    const auto parts = split(s, ':');
    if (parts.size() != 3) throw UsageError("grid '" + s + "' must be lo:hi:count");
    const double c = parse_real(parts[2]);
    if (c < 1 || c != static_cast<int>(c)) throw UsageError("grid count must be a positive integer");
    return geometric ? log_grid(parse_real(parts[0]), parse_real(parts[1]), static_cast<int>(c))
                     : lin_grid(parse_real(parts[0]), parse_real(parts[1]), static_cast<int>(c));
  }
  std::vector<double> g;
  for (const auto& t : split(s, ',')) g.push_back(parse_real(t));
  if (g.empty()) throw UsageError("empty grid");
  return g;
}

struct Output {
  std::string path = "-";

  void write(const Report& r) const {
    if (path == "-") {
      r.write_csv(std::cout);
      return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw UsageError("cannot open output file '" + path + "'");
    r.write_csv(os);
  }
};

int finish(const Report& r, const Output& out) {
  out.write(r);
  std::cerr << r.schema << ": " << (r.ok ? "ok" : "FAIL") << ": " << r.summary << '\n';
  return r.ok ? 0 : 1;
}

Report decompose_report(int n, const std::string& text, int degree) {
  const MultiPoly f = parse_poly(text, n);
  if (!f.is_zero() && !f.is_homogeneous(degree))
    throw UsageError("polynomial is not homogeneous of degree " + std::to_string(degree));
  const auto layers = harmonic_decompose(f, degree);
  Report r;
  r.schema = "hfock.decompose";
  r.meta = {{"n", std::to_string(n)}, {"poly", format_poly(f)}, {"degree", std::to_string(degree)}};
  r.columns = {"j", "layer_degree", "layer"};
  MultiPoly rebuilt(n);
  for (std::size_t j = 0; j < layers.size(); ++j) {
    const int d = degree - 2 * static_cast<int>(j);
    r.rows.push_back({std::to_string(j), std::to_string(d), format_poly(layers[j])});
    MultiPoly term = layers[j];
    for (std::size_t t = 0; t < j; ++t) term = term.multiply_by_radius_squared();
    rebuilt = rebuilt + term;
  }
  const double residual = (rebuilt - f).max_abs_coeff();
  r.meta.push_back({"reconstruction_residual", format_number(residual)});
  r.ok = residual <= 1e-10 * std::max(1.0, f.max_abs_coeff());
  r.summary = std::to_string(layers.size()) + " layers; reconstruction residual " + format_number(residual);
  return r;
}

Report project_report(int n, double alpha, const std::string& text, const std::vector<std::string>& at, int random,
                      std::uint64_t seed, PolyConstants c) {
  const MultiPoly f = parse_poly(text, n);
  const MultiPoly image = project_polynomial(f, alpha, c);
  std::vector<Point> points;
  for (const auto& s : at) points.push_back(parse_point(s, n));
  std::mt19937_64 rng(seed);
  for (int i = 0; i < random; ++i) {
    Point w(static_cast<std::size_t>(n));
    for (double& v : w) v = (static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0) * 2.0;
    points.push_back(w);
  }
  ProjectionQuadrature pq;
  pq.rest_degree = std::max(4, f.degree());
  const auto quad = project([&f](std::span<const double> y) { return f.evaluate(y); }, n, alpha, pq);
  Report r;
  r.schema = "hfock.project";
  r.meta = {{"n", std::to_string(n)},
            {"alpha", format_number(alpha)},
            {"seed", std::to_string(seed)},
            {"constants", c == PolyConstants::Derived ? "derived" : "printed"},
            {"poly", format_poly(f)},
            {"image", format_poly(image)}};
  r.columns.clear();
  for (int d = 1; d <= n; ++d) r.columns.push_back("w" + std::to_string(d));
  for (const char* col : {"image", "quadrature", "deviation"}) r.columns.push_back(col);
  double worst = 0.0;
  for (const auto& w : points) {
    std::vector<std::string> row;
    for (double v : w) row.push_back(format_number(v));
    const double a = image.evaluate(w), b = quad(w);
    const double dev = std::abs(a - b) / std::max(1.0, std::abs(b));
    worst = std::max(worst, dev);
    row.push_back(format_number(a));
    row.push_back(format_number(b));
    row.push_back(format_number(dev));
    r.rows.push_back(row);
  }
  r.ok = worst <= 1e-6 || c == PolyConstants::Printed;
  r.summary = "image " + format_poly(image) + "; max deviation from quadrature " + format_number(worst);
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Harmonic Fock kernel, projection and boundedness experiments"};
  app.require_subcommand(1);

  int n = 4;
  double alpha = 1.0;
  std::optional<double> beta, p;
  std::string xs, ys, poly;
  bool checked = false;
  Output out;
  std::uint64_t seed = 1;

  auto* kernel_cmd = app.add_subcommand("kernel", "kernel evaluation");
  kernel_cmd->require_subcommand(1);
  auto* eval = kernel_cmd->add_subcommand("eval", "H_alpha(x, y)");
  eval->add_option("--n", n, "dimension")->required();
  eval->add_option("--alpha", alpha, "kernel parameter");
  eval->add_option("--x", xs, "comma-separated point")->required();
  eval->add_option("--y", ys, "comma-separated point")->required();
  eval->add_flag("--checked", checked, "print every representation and their deviations");

  auto* proj = app.add_subcommand("project", "project a polynomial");
  std::vector<std::string> at;
  int random_points = 0;
  std::string constants = "derived";
  proj->add_option("--n", n, "dimension")->required();
  proj->add_option("--alpha", alpha, "kernel parameter");
  proj->add_option("--poly", poly, "polynomial")->required();
  proj->add_option("--at", at, "probe point, repeatable");
  proj->add_option("--random", random_points, "number of random probe points in [-2,2]^n");
  proj->add_option("--constants", constants, "derived or printed")->check(CLI::IsMember({"derived", "printed"}));
  proj->add_option("--seed", seed, "seed for random probe points");
  proj->add_option("--out", out.path, "CSV output path, - for stdout");

  auto* dec = app.add_subcommand("decompose", "harmonic decomposition of a homogeneous polynomial");
  int degree = 0;
  dec->add_option("--n", n, "dimension")->required();
  dec->add_option("--poly", poly, "polynomial")->required();
  dec->add_option("--degree", degree, "degree m")->required();
  dec->add_option("--out", out.path, "CSV output path, - for stdout");

  auto* exp = app.add_subcommand("experiment", "boundedness experiments");
  std::string name, grid;
  std::optional<int> k;
  int count = 100, max_degree = 6;
  exp->add_option("name", name, "experiment")
      ->required()
      ->check(CLI::IsMember({"necessity", "adjoint", "smallp", "schur", "l1", "polinomx", "phase"}));
  exp->add_option("--n", n, "dimension");
  exp->add_option("--alpha", alpha, "kernel parameter");
  exp->add_option("--beta", beta, "measure parameter");
  exp->add_option("--p", p, "exponent");
  exp->add_option("--k", k, "degree of the test family");
  exp->add_option("--grid", grid, "lo:hi:count or comma list; x for witnesses, |x| for schur and l1");
  exp->add_option("--count", count, "polinomx: number of random polynomials");
  exp->add_option("--degree", max_degree, "polinomx: maximum degree");
  exp->add_option("--seed", seed, "seed for random polynomials");
  std::string pairing = "standard";
  exp->add_option("--pairing", pairing, "schur: standard or printed exponent pairing")
      ->check(CLI::IsMember({"standard", "printed"}));
  exp->add_option("--out", out.path, "CSV output path, - for stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (eval->parsed()) {
      const Point x = parse_point(xs, n), y = parse_point(ys, n);
      if (!checked) {
        std::cout << format_number(kernel(n, alpha, x, y)) << '\n';
        return 0;
      }
      const CrossCheckReport rep = kernel_checked(n, alpha, x, y);
      for (const auto& e : rep.values) std::cout << e.name << ',' << format_number(e.value) << '\n';
      for (const auto& d : rep.deviations)
        std::cout << "deviation," << d.a << ',' << d.b << ',' << format_number(d.value) << '\n';
      if (rep.printed_n2) std::cout << "printed_n2," << format_number(*rep.printed_n2) << '\n';
      std::cout << "chosen," << format_number(rep.chosen) << '\n';
      std::cout << "max_deviation," << format_number(rep.max_deviation) << '\n';
      return rep.max_deviation > 1e-6 ? 1 : 0;
    }
    if (proj->parsed()) {
      return finish(project_report(n, alpha, poly, at, random_points, seed,
                                   constants == "printed" ? PolyConstants::Printed : PolyConstants::Derived),
                    out);
    }
    if (dec->parsed()) return finish(decompose_report(n, poly, degree), out);

    const double pv = p.value_or(name == "smallp" ? 0.5 : name == "adjoint" ? 1.5 : 2.0);
    const double bv = beta.value_or(name == "polinomx" ? 1.0 : name == "l1" ? 2.0 * alpha : 2.0 * alpha / pv);
    if (name == "necessity")
      return finish(run_necessity(n, pv, alpha, bv, k.value_or(400), parse_grid(grid.empty() ? "1e-3:1e3:25" : grid, true)),
                    out);
    if (name == "adjoint")
      return finish(run_adjoint(n, pv, alpha, bv, k.value_or(10), parse_grid(grid.empty() ? "1e-3:1e3:25" : grid, true)),
                    out);
    if (name == "smallp")
      return finish(run_small_p(n, pv, alpha, bv, k.value_or(0), parse_grid(grid.empty() ? "1:1e40:41" : grid, true)),
                    out);
    if (name == "schur") 
      return finish(run_schur(n, pv, alpha, bv, parse_grid(grid.empty() ? "0:8:17" : grid, false),
                              pairing == "printed" ? SchurPairing::Printed : SchurPairing::Standard),
                    out);
    if (name == "l1") return finish(run_l1(n, alpha, bv, parse_grid(grid.empty() ? "0:8:17" : grid, false)), out);
    if (name == "polinomx") return finish(run_polinomx(n, alpha, bv, count, max_degree, seed), out);
    return finish(run_phase(n, alpha), out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
