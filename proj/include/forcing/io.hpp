#pragma once

#include <filesystem>
#include <string>

#include "forcing/graph.hpp"
#include "forcing/graphon.hpp"
#include "forcing/lab.hpp"
#include "forcing/quasirandom.hpp"
#include "json.hpp"

namespace forcing {

using Json = nlohmann::json;

// Graph:         {"n": 3, "edges": [[0,1],[0,2],[1,2]]}, edges u < v, sorted
// ColoredGraph:  the Graph fields plus "classes": [[0],[1],[2]]
// StepGraphon:   {"weights": [...], "values": [[...], ...]}
// Parsers throw InvalidArgument naming the offending field or invariant.

Json to_json(const Graph& g);
Json to_json(const ColoredGraph& g);
Json to_json(const StepGraphon& w);
Json to_json(const QuasirandomReport& r);
Json to_json(const ConstancyReport& r);
Json to_json(const IdentityResidualReport& r);
Json to_json(const ChainRecord& r);
Json to_json(const PairResiduals& r);
Json to_json(const ForcingExperimentResult& r);
Json to_json(const std::vector<DeltaRow>& rows);
Json to_json(const ContrastWitness& w);

Graph graph_from_json(const Json& j);
ColoredGraph colored_graph_from_json(const Json& j);
StepGraphon graphon_from_json(const Json& j);

/// One line per trial: trial,r1,r2,linf,l2,cut,oscillation (17 significant digits).
std::string trials_csv(const ForcingExperimentResult& r);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string dump(const Json& j);

}  // namespace forcing
