#include "forcing/io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "forcing/errors.hpp"

namespace forcing {

namespace {

template <class T>
T field(const Json& j, const char* name) {
    if (!j.is_object() || !j.contains(name)) throw InvalidArgument(std::string("json: missing field \"") + name + "\"");
    try {
        return j.at(name).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw InvalidArgument(std::string("json: field \"") + name + "\" has the wrong type");
    }
}

Json constancy_fields(const ConstancyReport& r) {
    Json j{{"p", r.p}, {"linf", r.linf}, {"l2", r.l2}, {"oscillation", r.oscillation}};
    j["cut"] = r.cut ? Json(*r.cut) : Json(nullptr);
    j["cut_available"] = r.cut.has_value();
    return j;
}

}  // namespace

Json to_json(const Graph& g) {
    Json edges = Json::array();
    for (auto [u, v] : g.edges()) edges.push_back({u, v});
    return Json{{"n", g.vertex_count()}, {"edges", std::move(edges)}};
}

Json to_json(const ColoredGraph& g) {
    Json j = to_json(g.graph());
    j["classes"] = g.classes();
    return j;
}

Json to_json(const StepGraphon& w) { return Json{{"weights", w.weights()}, {"values", w.values()}}; }

Json to_json(const QuasirandomReport& r) {
    return Json{{"p", r.p},
                {"epsilon_star", r.epsilon_star},
                {"witness", r.witness},
                {"deviation", r.deviation},
                {"exact", r.exact}};
}

Json to_json(const ConstancyReport& r) { return constancy_fields(r); }

Json to_json(const IdentityResidualReport& r) {
    Json j{{"t", r.t},
           {"k", r.k},
           {"p", r.p},
           {"target", r.target},
           {"max_residual", r.max_residual},
           {"argmax_tuple", r.argmax_tuple}};
    if (!r.per_tuple.empty()) {
        Json rows = Json::array();
        for (const auto& row : r.per_tuple)
            rows.push_back({{"tuple", row.parts}, {"value", row.value}, {"residual", row.residual}, {"q", row.q}});
        j["per_tuple"] = std::move(rows);
    }
    return j;
}

Json to_json(const ChainRecord& r) {
    Json steps = Json::array();
    for (const auto& s : r.steps)
        steps.push_back({{"slack", s.slack},
                         {"mean", s.mean},
                         {"variance", s.variance},
                         {"equality_probe", s.equality_probe}});
    return Json{{"t", r.t}, {"k", r.k}, {"densities", r.densities}, {"steps", std::move(steps)}, {"holds", r.holds}};
}

Json to_json(const PairResiduals& r) {
    return Json{{"t_clique", r.t_clique}, {"t_doubled", r.t_doubled}, {"r1", r.r1}, {"r2", r.r2}};
}

Json to_json(const ForcingExperimentResult& r) {
    Json trials = Json::array();
    for (const auto& trial : r.trials)
        trials.push_back({{"trial", trial.index},
                          {"seed", trial.seed},
                          {"converged", trial.converged},
                          {"iterations", trial.iterations},
                          {"residuals", to_json(trial.residuals)},
                          {"distance", to_json(trial.distance)},
                          {"graphon", to_json(trial.graphon)}});
    auto points = [](const std::vector<ParetoPoint>& list) {
        Json out = Json::array();
        for (const auto& p : list)
            out.push_back({{"lambda", p.lambda},
                           {"start", p.start},
                           {"residual", p.residual},
                           {"l2", p.l2},
                           {"linf", p.linf},
                           {"graphon", to_json(p.graphon)}});
        return out;
    };
    Json j{{"pair", {{"t", r.t}, {"k", r.k}}},
           {"p", r.p},
           {"tol", r.tol},
           {"trials", std::move(trials)},
           {"summary",
            {{"converged", r.summary.converged},
             {"max_l2", r.summary.max_l2},
             {"max_linf", r.summary.max_linf}}}};
    if (!r.adversarial.empty()) {
        j["adversarial"] = points(r.adversarial);
        j["frontier"] = points(r.frontier);
    }
    return j;
}

Json to_json(const std::vector<DeltaRow>& rows) {
    Json out = Json::array();
    for (const auto& row : rows)
        out.push_back({{"delta", row.delta},
                       {"max_l2", row.max_l2},
                       {"linf", row.linf},
                       {"residuals", to_json(row.residuals)},
                       {"witness", to_json(row.witness)}});
    return out;
}

Json to_json(const ContrastWitness& w) {
    return Json{{"a", w.a},
                {"b", w.b},
                {"graphon", to_json(w.graphon)},
                {"edge_density", w.edge_density},
                {"triangle_density", w.triangle_density},
                {"distance", to_json(w.distance)}};
}

Graph graph_from_json(const Json& j) {
    const int n = field<int>(j, "n");
    const auto pairs = field<std::vector<std::vector<int>>>(j, "edges");
    std::vector<Edge> edges;
    for (const auto& e : pairs) {
        if (e.size() != 2) throw InvalidArgument("json: every edge must be a pair [u, v]");
        edges.emplace_back(e[0], e[1]);
    }
    return Graph(n, std::move(edges));
}

ColoredGraph colored_graph_from_json(const Json& j) {
    return ColoredGraph(graph_from_json(j), field<std::vector<std::vector<Vertex>>>(j, "classes"));
}

StepGraphon graphon_from_json(const Json& j) {
    return StepGraphon(field<std::vector<double>>(j, "weights"), field<std::vector<std::vector<double>>>(j, "values"));
}

std::string trials_csv(const ForcingExperimentResult& r) {
    std::ostringstream out;
    out << std::setprecision(17);
    out << "trial,r1,r2,linf,l2,cut,oscillation\n";
    for (const auto& t : r.trials) {
        out << t.index << ',' << t.residuals.r1 << ',' << t.residuals.r2 << ',' << t.distance.linf << ','
            << t.distance.l2 << ',';
        if (t.distance.cut) out << *t.distance.cut;
        out << ',' << t.distance.oscillation << '\n';
    }
    return out.str();
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open " + path.string());
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument(path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot write " + path.string());
    out << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace forcing
