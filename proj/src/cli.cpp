#include "cli.hpp"

#include <CLI11.hpp>
#include <fstream>

#include "dot.hpp"
#include "jsonio.hpp"

namespace tc {

namespace {

void emit(const json& j, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw io_error("cannot write " + out_path);
  f << j.dump(2) << "\n";
}

void emit_text(const std::string& s, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << s;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw io_error("cannot write " + out_path);
  f << s;
}

std::string kind_of(const json& j) { return j.at("kind").get<std::string>(); }

json eval_result_json(const EvalResult& r) {
  return {{"matrix", to_json(r.matrix)},
          {"domain_dim", r.domain_dim},
          {"codomain_dim", r.codomain_dim}};
}

AlgebraSpec load_algebra(const std::string& path) {
  if (path.empty()) return qubit_algebra();
  return algebra_from_json(load_document(path, "algebra"));
}

void cmd_validate(const std::string& file, std::ostream& out) {
  json j = load_document(file);
  std::string kind = kind_of(j);
  if (kind == "graph") {
    validate(graph_from_json(j));
  } else if (kind == "transport_graph") {
    validate_transport_graph(transport_graph_from_json(j));
  } else if (kind == "multitangle") {
    Multitangle m = multitangle_from_json(j);
    for (const auto& s : m.summands) validate_transport_graph(s);
  } else if (kind == "connection") {
    conn_from_json(j);
  } else if (kind == "path") {
    validate_path(path_from_json(j));
  } else if (kind == "algebra") {
    validate_algebra(algebra_from_json(j));
  } else if (kind == "circuit") {
    Circuit c = circuit_from_json(j);
    for (std::size_t l = 0; l < c.layers.size(); ++l) layer_multitangle(c, l);
  } else {
    throw io_error(file + ": unknown kind \"" + kind + "\"");
  }
  out << "ok: " << kind << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err_os) {
  CLI::App app{"transportc: expression-graph reduction and parallel transport"};
  app.require_subcommand(1);

  std::string in_a, in_b, out_path, dot_path;
  std::string conn_path, path_path, graph_path, algebra_path, family_path;
  std::string circuit_path, input_bits;
  int steps = default_transport_steps(), samples = 5;
  bool as_json = false;

  auto* validate_cmd = app.add_subcommand("validate", "check a document");
  validate_cmd->add_option("file", in_a)->required();

  auto* reduce_cmd = app.add_subcommand("reduce", "reduce an expression graph");
  reduce_cmd->add_option("file", in_a)->required();
  reduce_cmd->add_option("-o,--output", out_path);
  reduce_cmd->add_option("--dot", dot_path, "also write a Graphviz rendering");

  auto* expr_cmd = app.add_subcommand("expr", "extract the expression of a graph");
  expr_cmd->add_option("file", in_a)->required();
  expr_cmd->add_flag("--json", as_json, "emit the AST instead of pretty text");

  auto* glue_cmd = app.add_subcommand("glue", "glue h onto g (sources of h to targets of g)");
  glue_cmd->add_option("outer", in_a)->required();
  glue_cmd->add_option("inner", in_b)->required();
  glue_cmd->add_option("-o,--output", out_path);

  auto* union_cmd = app.add_subcommand("union", "disjoint union of two graphs");
  union_cmd->add_option("a", in_a)->required();
  union_cmd->add_option("b", in_b)->required();
  union_cmd->add_option("-o,--output", out_path);

  auto* add_cmd = app.add_subcommand("add", "sum of two multitangles");
  add_cmd->add_option("a", in_a)->required();
  add_cmd->add_option("b", in_b)->required();
  add_cmd->add_option("-o,--output", out_path);

  auto* mtc_cmd = app.add_subcommand("mtcompose", "compose multitangles (first file after second)");
  mtc_cmd->add_option("n", in_a)->required();
  mtc_cmd->add_option("m", in_b)->required();
  mtc_cmd->add_option("-o,--output", out_path);

  auto* transport_cmd = app.add_subcommand("transport", "parallel transport along a path");
  transport_cmd->add_option("--conn", conn_path)->required();
  transport_cmd->add_option("--path", path_path)->required();
  transport_cmd->add_option("--steps", steps);
  transport_cmd->add_option("-o,--output", out_path);

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a transport graph or multitangle");
  eval_cmd->add_option("--graph", graph_path)->required();
  eval_cmd->add_option("--conn", conn_path, "overrides the document's connection");
  eval_cmd->add_option("--algebra", algebra_path, "defaults to the qubit algebra");
  eval_cmd->add_option("--family", family_path, "gauge family {\"k\": matrix}; emits samples");
  eval_cmd->add_option("--samples", samples);
  eval_cmd->add_option("-o,--output", out_path);

  auto* circuit_cmd = app.add_subcommand("circuit", "quantum circuit frontend");
  circuit_cmd->require_subcommand(1);
  auto* run_cmd = circuit_cmd->add_subcommand("run", "apply a circuit to a basis state");
  run_cmd->add_option("--circuit", circuit_path)->required();
  run_cmd->add_option("--input", input_bits, "bitstring, qubit 0 first")->required();
  run_cmd->add_option("-o,--output", out_path);
  auto* lower_cmd = circuit_cmd->add_subcommand("lower", "lower a circuit to a multitangle");
  lower_cmd->add_option("--circuit", circuit_path)->required();
  lower_cmd->add_option("-o,--output", out_path);

  auto* render_cmd = app.add_subcommand("render", "Graphviz rendering of a graph");
  render_cmd->add_option("file", in_a)->required();
  render_cmd->add_option("-o,--output", out_path);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err_os << e.what() << "\n";
    return 2;
  }

  try {
    if (*validate_cmd) {
      cmd_validate(in_a, out);
    } else if (*reduce_cmd) {
      ReducedGraph r = reduce(graph_from_json(load_document(in_a, "graph")));
      if (!dot_path.empty()) emit_text(render_dot(r), dot_path, out);
      emit(to_json(r.graph), out_path, out);
    } else if (*expr_cmd) {
      ExprPtr e = extract_expr(reduce(graph_from_json(load_document(in_a, "graph"))));
      if (as_json)
        emit(expr_to_json(e), out_path, out);
      else
        emit_text(pretty(e) + "\n", out_path, out);
    } else if (*glue_cmd || *union_cmd) {
      json ja = load_document(in_a), jb = load_document(in_b);
      if (kind_of(ja) != kind_of(jb))
        throw io_error("operands have different kinds: " + kind_of(ja) + " vs " + kind_of(jb));
      bool is_glue = glue_cmd->parsed();
      if (kind_of(ja) == "graph") {
        Graph a = graph_from_json(ja), b = graph_from_json(jb);
        emit(to_json(is_glue ? glue(a, b) : disjoint_union(a, b)), out_path, out);
      } else if (kind_of(ja) == "transport_graph") {
        TransportGraph a = transport_graph_from_json(ja), b = transport_graph_from_json(jb);
        emit(to_json(is_glue ? glue(a, b) : disjoint_union(a, b)), out_path, out);
      } else {
        throw io_error("expected graph or transport_graph operands");
      }
    } else if (*add_cmd) {
      Multitangle a = multitangle_from_json(load_document(in_a, "multitangle"));
      Multitangle b = multitangle_from_json(load_document(in_b, "multitangle"));
      emit(to_json(add(a, b)), out_path, out);
    } else if (*mtc_cmd) {
      Multitangle n = multitangle_from_json(load_document(in_a, "multitangle"));
      Multitangle m = multitangle_from_json(load_document(in_b, "multitangle"));
      emit(to_json(compose_multitangles(n, m)), out_path, out);
    } else if (*transport_cmd) {
      ConnectionSpec c = conn_from_json(load_document(conn_path, "connection"));
      PathSpec p = path_from_json(load_document(path_path, "path"));
      emit(to_json(transport(c, p, steps)), out_path, out);
    } else if (*eval_cmd) {
      AlgebraSpec alg = load_algebra(algebra_path);
      json jg = load_document(graph_path);
      if (kind_of(jg) == "multitangle") {
        if (!family_path.empty()) throw io_error("--family needs a transport_graph");
        emit(eval_result_json(eval_multitangle(multitangle_from_json(jg), alg)), out_path, out);
      } else if (kind_of(jg) == "transport_graph") {
        TransportGraph tg = transport_graph_from_json(jg);
        ConnectionSpec conn = !conn_path.empty()
                                  ? conn_from_json(load_document(conn_path, "connection"))
                                  : (tg.conn ? *tg.conn : zero_connection(alg.n, tg.chart));
        if (family_path.empty()) {
          emit(eval_result_json(eval_graph(tg, conn, alg)), out_path, out);
        } else {
          Mat k = mat_from_json(load_document(family_path, "gauge_family").at("k"));
          auto gauge_path = [&k](double t) { return GaugeMap::exp_family(k, 0, 0, t); };
          json fam = json::array();
          for (const auto& r : eval_2morphism_family(tg, conn, gauge_path, samples, alg))
            fam.push_back(eval_result_json(r));
          emit(fam, out_path, out);
        }
      } else {
        throw io_error(graph_path + ": expected transport_graph or multitangle");
      }
    } else if (*run_cmd) {
      Circuit c = circuit_from_json(load_document(circuit_path, "circuit"));
      std::vector<int> kets;
      for (char b : input_bits) {
        if (b != '0' && b != '1') throw io_error("--input must be a bitstring");
        kets.push_back(b - '0');
      }
      if (int(kets.size()) != c.qubits)
        throw err("InterfaceMismatch", "input has " + std::to_string(kets.size()) +
                                           " bits for " + std::to_string(c.qubits) + " qubits");
      emit(to_json(apply_circuit(c, make_register(kets))), out_path, out);
    } else if (*lower_cmd) {
      Circuit c = circuit_from_json(load_document(circuit_path, "circuit"));
      emit(to_json(circuit_multitangle(c)), out_path, out);
    } else if (*render_cmd) {
      json j = load_document(in_a);
      Graph g = kind_of(j) == "transport_graph"
                    ? transport_graph_from_json(j).graph
                    : graph_from_json(j);
      emit_text(render_dot(g), out_path, out);
    }
  } catch (const io_error& e) {
    err_os << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    err_os << "error: " << e.what() << "\n";
    return 2;
  } catch (const domain_error& e) {
    err_os << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace tc
