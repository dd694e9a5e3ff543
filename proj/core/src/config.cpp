#include "uhho/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace uhho {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string w;
  while (is >> w) out.push_back(w);
  return out;
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

double to_double(const std::string& origin, int line, const std::string& v) {
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    fail(origin, line, "expected a number, got '" + v + "'");
  }
}

int to_int(const std::string& origin, int line, const std::string& v) {
  try {
    size_t pos = 0;
    const int i = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    fail(origin, line, "expected an integer, got '" + v + "'");
  }
}

}  // namespace

RunConfig parse_config(std::istream& is, const std::string& origin) {
  RunConfig cfg;
  std::string section;
  std::string raw;
  int lineno = 0;
  bool have_case = false;

  while (std::getline(is, raw)) {
    ++lineno;
    std::string line = trim(raw);
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(origin, lineno, "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "mesh" && section != "levelset" && section != "problem" &&
          section != "hho" && section != "convergence" && section != "output")
        fail(origin, lineno, "unknown section '" + section + "'");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(origin, lineno, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty()) fail(origin, lineno, "empty key or value");

    auto num = [&]() { return to_double(origin, lineno, val); };
    auto integer = [&]() { return to_int(origin, lineno, val); };

    if (section == "mesh") {
      if (key == "nx") cfg.nx = integer();
      else if (key == "ny") cfg.ny = integer();
      else if (key == "xmin") cfg.domain.xmin = num();
      else if (key == "xmax") cfg.domain.xmax = num();
      else if (key == "ymin") cfg.domain.ymin = num();
      else if (key == "ymax") cfg.domain.ymax = num();
      else if (key == "perturbation") cfg.perturbation = num();
      else if (key == "seed") cfg.seed = static_cast<unsigned long long>(to_double(origin, lineno, val));
      else if (key == "file") cfg.mesh_file = val;
      else fail(origin, lineno, "unknown key 'mesh." + key + "'");
    } else if (section == "levelset") {
      if (key == "type") cfg.ls_type = val;
      else if (key == "params") {
        for (const auto& w : split(val)) cfg.ls_params.push_back(to_double(origin, lineno, w));
      } else if (key == "coeffs") {
        // "px py c ; px py c ; ..."
        std::istringstream cs(val);
        std::string term;
        while (std::getline(cs, term, ';')) {
          const auto w = split(term);
          if (w.size() != 3) fail(origin, lineno, "poly coeffs: expected 'px py c' triples");
          cfg.ls_coeffs.push_back({to_int(origin, lineno, w[0]), to_int(origin, lineno, w[1]),
                                   to_double(origin, lineno, w[2])});
        }
      } else fail(origin, lineno, "unknown key 'levelset." + key + "'");
    } else if (section == "problem") {
      if (key == "kappa1") cfg.kappa1 = num();
      else if (key == "kappa2") cfg.kappa2 = num();
      else if (key == "case") { cfg.case_name = val; have_case = true; }
      else if (key == "r0") cfg.r0 = num();
      else if (key == "x0") cfg.x0 = num();
      else if (key == "line_a") cfg.line_a = num();
      else if (key == "line_b") cfg.line_b = num();
      else if (key == "line_c") cfg.line_c = num();
      else if (key == "alpha1") cfg.alpha1 = num();
      else if (key == "alpha2") cfg.alpha2 = num();
      else if (key == "beta1") cfg.beta1 = num();
      else if (key == "beta2") cfg.beta2 = num();
      else if (key == "degree") cfg.poly_degree = integer();
      else if (key == "profile") cfg.profile = val;
      else fail(origin, lineno, "unknown key 'problem." + key + "'");
    } else if (section == "hho") {
      if (key == "k") cfg.k = integer();
      else if (key == "eta") cfg.eta = (val == "auto") ? 0.0 : num();
      else if (key == "n_sub") cfg.n_sub = (val == "auto") ? 0 : integer();
      else if (key == "delta") cfg.delta = (val == "auto") ? 0.0 : num();
      else fail(origin, lineno, "unknown key 'hho." + key + "'");
    } else if (section == "convergence") {
      if (key == "meshes") {
        for (const auto& w : split(val)) cfg.meshes.push_back(to_int(origin, lineno, w));
      } else if (key == "eoc_min") cfg.eoc_min = (val == "auto") ? 0.0 : num();
      else fail(origin, lineno, "unknown key 'convergence." + key + "'");
    } else if (section == "output") {
      if (key == "dump_matrix") cfg.dump_matrix = (val == "true" || val == "1");
      else if (key == "plot_resolution") cfg.plot_resolution = integer();
      else fail(origin, lineno, "unknown key 'output." + key + "'");
    } else {
      fail(origin, lineno, "key '" + key + "' outside any section");
    }
  }

  if (cfg.k < 0) throw ConfigError(origin + ": hho.k must be >= 0");
  if (cfg.nx < 1 || cfg.ny < 1) throw ConfigError(origin + ": mesh.nx and mesh.ny must be >= 1");
  if (cfg.perturbation < 0.0 || cfg.perturbation > 0.2)
    throw ConfigError(origin + ": mesh.perturbation must lie in [0, 0.2]");
  (void)have_case;

  if (const char* env = std::getenv("CUT_HHO_SEED")) cfg.seed = std::strtoull(env, nullptr, 10);
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(is, path);
}

LevelSet RunConfig::build_levelset() const {
  auto need = [&](size_t n, const char* what) {
    if (ls_params.size() != n)
      throw ConfigError(std::string("levelset.params: ") + what + " expects " + std::to_string(n) +
                        " numbers");
  };
  if (ls_type == "line") {
    need(3, "line(a,b,c)");
    return make_line_levelset(ls_params[0], ls_params[1], ls_params[2]);
  }
  if (ls_type == "circle") {
    need(3, "circle(cx,cy,r)");
    return make_circle_levelset(ls_params[0], ls_params[1], ls_params[2]);
  }
  if (ls_type == "ellipse") {
    need(4, "ellipse(cx,cy,rx,ry)");
    return make_ellipse_levelset(ls_params[0], ls_params[1], ls_params[2], ls_params[3]);
  }
  if (ls_type == "poly") {
    if (ls_coeffs.empty()) throw ConfigError("levelset.coeffs: required for type poly");
    return make_poly_levelset(ls_coeffs);
  }
  throw ConfigError("levelset.type: unknown type '" + ls_type + "'");
}

ManufacturedCase RunConfig::build_case(int k_effective) const {
  if (case_name.empty()) throw ConfigError("missing required key 'problem.case'");
  CaseParams p;
  p.domain = domain;
  p.kappa1 = kappa1;
  p.kappa2 = kappa2;
  p.r0 = r0;
  p.x0 = x0;
  p.line_a = line_a;
  p.line_b = line_b;
  p.line_c = line_c;
  p.alpha1 = alpha1;
  p.alpha2 = alpha2;
  p.beta1 = beta1;
  p.beta2 = beta2;
  p.degree = poly_degree >= 0 ? poly_degree : k_effective + 1;
  p.profile = profile;
  LevelSet overlay;
  if (has_levelset()) {
    overlay = build_levelset();
    p.interface_ls = &overlay;
  }
  return make_case(case_name, p);
}

PipelineOptions RunConfig::options(int threads) const {
  PipelineOptions opt;
  opt.k = k;
  opt.eta_override = eta;
  opt.n_sub = n_sub;
  opt.delta = delta;
  opt.threads = threads;
  return opt;
}

}  // namespace uhho
