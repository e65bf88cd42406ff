#include "verify/suites.hpp"

#include <lpuhf/criteria.hpp>
#include <lpuhf/error.hpp>
#include <lpuhf/json_io.hpp>
#include <lpuhf/matalg.hpp>
#include <lpuhf/perturbation.hpp>
#include <lpuhf/spatial_check.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace lpuhf;
using io::json;

namespace {

enum Exit { ok = 0, verification_failed = 1, input_error = 2, capacity = 3 };

// Inline JSON if it looks like JSON, otherwise a path.
json load_json(const std::string& arg, const std::string& what) {
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) return json::parse(arg);
  std::ifstream in(arg);
  if (!in) throw InputError("cannot open " + what + " file '" + arg + "'");
  return json::parse(in);
}

std::pair<std::size_t, std::size_t> parse_unit(const std::string& text) {
  std::size_t j = 0, k = 0;
  char comma = 0;
  std::istringstream is(text);
  if (!(is >> j >> comma >> k) || comma != ',' || !is.eof()) throw InputError("--unit expects j,k");
  return {j, k};
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

json spatial_check_json(const SpatialRepCheck& r) {
  json parts = json::array();
  for (const auto& part : r.partition) parts.push_back(std::vector<std::size_t>(part.begin(), part.end()));
  return {{"spatial", r.spatial}, {"refusal", r.refusal}, {"partition", parts}};
}

std::vector<Mat> unit_table(std::size_t d, const std::function<Mat(const CMatrix&)>& rho) {
  std::vector<Mat> out;
  for (std::size_t j = 1; j <= d; ++j)
    for (std::size_t k = 1; k <= d; ++k) out.push_back(rho(matrix_unit<Complex>(d, j, k)));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lpuhf: norms, similarity systems and checks for Lp UHF constructions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", verify::tool_version());

  std::string system_arg, element_arg, unit_arg, family_arg, p_text = "2", suite = "all", out_path;
  std::size_t d = 2, n = 100;
  std::uint64_t seed = 0;

  auto* norm = app.add_subcommand("norm", "norm of an element of M_d^{p,S} as a certified interval");
  norm->add_option("--system", system_arg, "system JSON (inline or path)")->required();
  auto* elem_opt = norm->add_option("--element", element_arg, "matrix JSON (inline or path)");
  norm->add_option("--unit", unit_arg, "matrix unit j,k (1-based)")->excludes(elem_opt);
  norm->add_option("--p", p_text, "exponent, e.g. 3, 3/2, inf");

  auto* pbound = app.add_subcommand("pbound", "R_{p,S} = sup ||s(i)|| ||s(i)^-1||");
  pbound->add_option("--system", system_arg, "system JSON (inline or path)")->required();
  pbound->add_option("--p", p_text, "exponent");

  auto* system = app.add_subcommand("system", "similarity system utilities");
  system->require_subcommand(1);
  auto* validate = system->add_subcommand("validate", "list every violated system condition");
  validate->add_option("--system", system_arg, "system JSON (inline or path)")->required();

  auto* flip = app.add_subcommand("flip", "norms and exact identities of the flip element y_d");
  flip->add_option("--d", d, "matrix size")->check(CLI::PositiveNumber);
  flip->add_option("--p", p_text, "exponent");

  auto* classify = app.add_subcommand("classify", "series diagnostics for a stage recipe");
  classify->add_option("--family", family_arg, "family or stage-spec JSON (inline or path)")->required();
  classify->add_option("--p", p_text, "exponent");
  classify->add_option("--n", n, "prefix length")->check(CLI::PositiveNumber);

  auto* spatialize_cmd = app.add_subcommand("spatialize", "similarity of a diagonal system to a spatial representation");
  spatialize_cmd->add_option("--system", system_arg, "system JSON (inline or path)")->required();
  spatialize_cmd->add_option("--p", p_text, "exponent");

  auto* spatial = app.add_subcommand("spatial-check", "is the representation psi^{p,S} spatial");
  spatial->add_option("--system", system_arg, "system JSON (inline or path)")->required();
  spatial->add_option("--p", p_text, "exponent");

  auto* verify_cmd = app.add_subcommand("verify", "run verification suites and write a report");
  std::string names = "all, none";
  for (const auto& s : verify::suite_names()) names += ", " + s;
  verify_cmd->add_option("--suite", suite, "comma-separated suites: " + names);
  verify_cmd->add_option("--seed", seed, "corpus seed");
  verify_cmd->add_option("--out", out_path, "report path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? Exit::ok : Exit::input_error;
  }

  try {
    const auto load_system = [&](bool validated = true) {
      return io::system_from_json(load_json(system_arg, "system"), validated);
    };
    const Exponent p = Exponent::parse(p_text);

    if (*norm) {
      const auto s = load_system();
      CMatrix x;
      if (!unit_arg.empty()) {
        const auto [j, k] = parse_unit(unit_arg);
        x = matrix_unit<Complex>(s.d(), j, k);
      } else if (!element_arg.empty()) {
        x = io::matrix_from_json(load_json(element_arg, "element"));
      } else {
        throw InputError("norm needs --element or --unit");
      }
      emit(io::to_json(norm_pS(s, x, p).interval));
    } else if (*pbound) {
      emit(io::to_json(p_bound(load_system(), p)));
    } else if (*validate) {
      const auto s = load_system(false);
      json v = json::array();
      for (const auto& viol : validate_system(s))
        v.push_back({{"kind", to_string(viol.kind)}, {"message", viol.message}});
      emit({{"valid", v.empty()}, {"violations", v}});
      return v.empty() ? Exit::ok : Exit::input_error;
    } else if (*flip) {
      json out{{"d", d}, {"p", p.to_string()}, {"norm", io::to_json(opnorm(flip_mat(d), p))}};
      if (d <= 3) {
        // exact identities in rational arithmetic
        const QMatrix y = flip_element<QComplex>(d);
        const QMatrix id = QMatrix::Identity(d * d, d * d);
        const auto z = flip_decomposition<QComplex>(d);
        const auto avg = group_average_decomposition<QComplex>(signed_permutation_group<QComplex>(d));
        out["exact"] = {
            {"square_is_d^-2", exactly_equal(QMatrix(y * y), QMatrix(QComplex::ratio(1, static_cast<long long>(d * d)) * id))},
            {"delta_is_one", exactly_equal(delta(z), QMatrix::Identity(d, d))},
            {"delta_op_is_one", exactly_equal(delta_op(z), QMatrix::Identity(d, d))},
            {"group_average_is_y", exactly_equal(flatten(avg), y)},
            {"projective_upper", projective_upper_exact(avg).str()}};
      }
      emit(out);
    } else if (*classify) {
      const auto recipe = io::recipe_from_json(load_json(family_arg, "family"));
      emit(io::to_json(series_report(recipe, p, n)));
    } else if (*spatialize_cmd) {
      const auto s = load_system();
      const auto sp = spatialize(s, p);
      const auto table = unit_table(s.d(), [&](const CMatrix& x) { return spatial_rep(sp, s, x); });
      emit({{"r", sp.r},
            {"w_norm", sp.w_norm},
            {"w_minus_one_norm", sp.w_minus_one_norm},
            {"w_inverse_norm", sp.w_inverse_norm},
            {"w_inverse_minus_one_norm", sp.w_inverse_minus_one_norm},
            {"residual", sp.residual},
            {"tau", spatial_check_json(is_spatial_rep(table, s.d(), p))}});
    } else if (*spatial) {
      const auto s = load_system();
      const auto table = unit_table(s.d(), [&](const CMatrix& x) { return rep_matrix(s, x); });
      emit(spatial_check_json(is_spatial_rep(table, s.d(), p)));
    } else if (*verify_cmd) {
      const auto report = verify::run(suite, seed);
      const std::string text = verify::to_json(report).dump(2) + "\n";
      if (out_path.empty()) {
        std::cout << text;
      } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw InputError("cannot write report to '" + out_path + "'");
        f << text;
      }
      for (const auto& r : report.records)
        if (r.status == verify::Status::fail) std::cerr << "FAIL " << r.id << '\n';
      std::cerr << verify::summary_line(report) << '\n';
      return report.passed() ? Exit::ok : Exit::verification_failed;
    }
  } catch (const CapacityError& e) {
    std::cerr << "capacity: " << e.what() << '\n';
    return Exit::capacity;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return Exit::input_error;
  } catch (const UnsupportedError& e) {
    std::cerr << "unsupported: " << e.what() << '\n';
    return Exit::input_error;
  } catch (const json::exception& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return Exit::input_error;
  } catch (const StructureError& e) {
    std::cerr << "verification failed: " << e.what() << '\n';
    return Exit::verification_failed;
  }
  return Exit::ok;
}
