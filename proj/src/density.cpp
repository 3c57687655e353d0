#include "forcing/density.hpp"

#include <map>
#include <string>

#include "density_engine.hpp"
#include "forcing/errors.hpp"

namespace forcing {

using detail::Accumulator;
using detail::EntryTable;
using detail::Jet;
using detail::PinnedPlan;

namespace {

using ClassMask = std::uint64_t;

/// Conditional densities of the iterated doublings G_0 = F, G_l = T(G_{l-1})
/// on class l-1, with a set of color classes pinned.
///
/// P(G_l | C = s) splits over the two copies glued at step l: the shared
/// class is summed out (unless it is itself pinned) and each copy sees its
/// half of the pinned vertices, so
///   P(G_l | C = s) = sum_b w(b) P(G_{l-1} | C+{l-1} = (b, s_0)) P(G_{l-1} | C+{l-1} = (b, s_1)).
/// At level 0 the conditional density is a direct sum over the free
/// vertices of F. Tables are memoized per (level, C).
template <class S>
class DoublingEvaluator {
public:
    DoublingEvaluator(const ColoredGraph& f, int levels, const EntryTable<S>& table) : table_(table) {
        if (f.class_count() > 63) throw UnsupportedSize("doubling: at most 63 color classes are supported");
        graphs_.push_back(f);
        copies_.push_back({});
        for (int l = 1; l <= levels; ++l) {
            auto step = double_class_traced(graphs_.back(), l - 1);
            graphs_.push_back(std::move(step.result));
            copies_.push_back({std::move(step.copy0), std::move(step.copy1)});
        }
        for (const auto& g : graphs_) colors_.push_back(g.color_of());
    }

    S evaluate(int level, ClassMask classes, std::span<const int> assignment) {
        return evaluate(node(level, classes), assignment);
    }

    std::size_t pinned_count(int level, ClassMask classes) { return node(level, classes).pinned.size(); }

private:
    static constexpr double kMemoEntryBudget = std::is_same_v<S, Jet> ? 1048576.0 : 16777216.0;

    struct Node {
        int level = 0;
        std::vector<Vertex> pinned;
        Node* child = nullptr;
        int summed = 0;                      // shared-class vertices summed out
        std::array<std::vector<int>, 2> source;  // >= 0: parent slot, < 0: -(summed slot) - 1
        PinnedPlan plan;
        std::vector<S> memo;
        std::vector<char> done;
    };

    Node& node(int level, ClassMask classes) {
        auto [it, inserted] = nodes_.try_emplace({level, classes});
        Node& nd = it->second;
        if (!inserted) return nd;

        nd.level = level;
        const auto& color = colors_[level];
        for (Vertex v = 0; v < static_cast<Vertex>(color.size()); ++v)
            if (classes >> color[v] & 1) nd.pinned.push_back(v);

        const int m = table_.parts;
        const double entries = std::pow(static_cast<double>(m), static_cast<double>(nd.pinned.size()));
        if (entries > kMemoEntryBudget)
            throw UnsupportedSize("doubling_density: " + std::to_string(nd.pinned.size()) +
                                  " pinned vertices over " + std::to_string(m) + " parts exceed the table budget");
        nd.memo.assign(static_cast<std::size_t>(entries), detail::make_scalar<S>(0.0, table_.params));
        nd.done.assign(static_cast<std::size_t>(entries), 0);

        if (level == 0) {
            nd.plan = PinnedPlan(graphs_[0].graph(), nd.pinned);
            detail::check_summation_budget(m, nd.plan.free_count(), "doubling_density");
            return nd;
        }

        const int shared = level - 1;
        const ClassMask child_classes = classes | (ClassMask{1} << shared);
        Node& child = node(level - 1, child_classes);
        nd.child = &child;

        std::vector<int> slot_in_parent(colors_[level].size(), -1);
        for (std::size_t i = 0; i < nd.pinned.size(); ++i) slot_in_parent[nd.pinned[i]] = static_cast<int>(i);
        const bool shared_pinned = classes >> shared & 1;
        const auto& child_color = colors_[level - 1];
        for (int b = 0; b < 2; ++b) {
            int summed = 0;
            for (Vertex u : child.pinned) {
                if (child_color[u] == shared && !shared_pinned)
                    nd.source[b].push_back(-(summed++) - 1);
                else
                    nd.source[b].push_back(slot_in_parent[copies_[level][b][u]]);
            }
            nd.summed = summed;
        }
        if (std::pow(static_cast<double>(m), nd.summed) > detail::kSummationBudget)
            throw UnsupportedSize("doubling_density: shared class too large to sum out");
        return nd;
    }

    std::size_t encode(std::span<const int> assignment) const {
        std::size_t index = 0;
        for (std::size_t i = assignment.size(); i-- > 0;) index = index * table_.parts + assignment[i];
        return index;
    }

    S evaluate(Node& nd, std::span<const int> assignment) {
        if (assignment.size() != nd.pinned.size())
            throw InvalidArgument("doubling_density: assignment size differs from pinned set");
        const std::size_t index = encode(assignment);
        if (nd.done[index]) return nd.memo[index];

        S result;
        if (nd.level == 0) {
            result = nd.plan.evaluate(assignment, table_);
        } else {
            const int m = table_.parts;
            std::vector<int> summed(nd.summed, 0);
            std::array<std::vector<int>, 2> child_assignment{std::vector<int>(nd.child->pinned.size()),
                                                             std::vector<int>(nd.child->pinned.size())};
            Accumulator<S> acc(table_.params);
            while (true) {
                double mass = 1.0;
                for (int x : summed) mass *= table_.weights[x];
                for (int b = 0; b < 2; ++b)
                    for (std::size_t i = 0; i < nd.source[b].size(); ++i) {
                        const int src = nd.source[b][i];
                        child_assignment[b][i] = src >= 0 ? assignment[src] : summed[-src - 1];
                    }
                const S left = evaluate(*nd.child, child_assignment[0]);
                const S right = evaluate(*nd.child, child_assignment[1]);
                acc.add(left * right * mass);

                int pos = 0;
                while (pos < nd.summed && ++summed[pos] == m) summed[pos++] = 0;
                if (pos == nd.summed) break;
            }
            result = acc.result();
        }
        nd.memo[index] = result;
        nd.done[index] = 1;
        return result;
    }

    const EntryTable<S>& table_;
    std::vector<ColoredGraph> graphs_;
    std::vector<std::array<std::vector<Vertex>, 2>> copies_;
    std::vector<std::vector<int>> colors_;
    std::map<std::pair<int, ClassMask>, Node> nodes_;
};

void check_doubling_count(const ColoredGraph& f, int k) {
    if (k < 0 || k > f.class_count()) throw InvalidArgument("doubling_density: k must lie in [0, t]");
}

DensityGradient unpack(const Jet& jet, int m) {
    DensityGradient out;
    out.value = jet.value;
    out.gradient.assign(m, std::vector(m, 0.0));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) out.gradient[a][b] = jet.grad[symmetric_index(m, a, b)];
    return out;
}

}  // namespace

double graphon_density(const Graph& motif, const StepGraphon& w) {
    PinnedPlan plan(motif, {});
    detail::check_summation_budget(w.parts(), plan.free_count(), "graphon_density");
    return static_cast<double>(plan.evaluate<long double>({}, detail::value_table(w)));
}

double pinned_density(const Graph& motif, std::span<const Vertex> pinned, std::span<const int> assignment,
                      const StepGraphon& w) {
    if (assignment.size() != pinned.size())
        throw InvalidArgument("pinned density: every pinned vertex needs exactly one assigned part");
    for (int part : assignment)
        if (part < 0 || part >= w.parts()) throw InvalidArgument("pinned density: assigned part out of range");
    PinnedPlan plan(motif, pinned);
    detail::check_summation_budget(w.parts(), plan.free_count(), "pinned_density");
    return static_cast<double>(plan.evaluate<long double>(assignment, detail::value_table(w)));
}

PinnedDensity make_pinned_density(const Graph& motif, std::vector<Vertex> pinned, std::vector<int> assignment,
                                  const StepGraphon& w) {
    const double value = pinned_density(motif, pinned, assignment, w);
    return {motif, std::move(pinned), std::move(assignment), value};
}

double doubling_density(const ColoredGraph& f, int k, const StepGraphon& w) {
    check_doubling_count(f, k);
    const auto table = detail::value_table(w);
    DoublingEvaluator<long double> evaluator(f, k, table);
    return static_cast<double>(evaluator.evaluate(k, 0, {}));
}

ClassConditional class_conditional_densities(const ColoredGraph& f, int level, int class_index,
                                             const StepGraphon& w) {
    check_doubling_count(f, level);
    if (class_index < 0 || class_index >= f.class_count())
        throw InvalidArgument("class_conditional_densities: class index out of range");
    const auto table = detail::value_table(w);
    DoublingEvaluator<long double> evaluator(f, level, table);
    const ClassMask classes = ClassMask{1} << class_index;
    const std::size_t pinned = evaluator.pinned_count(level, classes);

    ClassConditional out;
    std::vector<int> assignment(pinned, 0);
    const int m = w.parts();
    while (true) {
        double mass = 1.0;
        for (int x : assignment) mass *= w.weight(x);
        out.mass.push_back(mass);
        out.density.push_back(static_cast<double>(evaluator.evaluate(level, classes, assignment)));
        std::size_t pos = 0;
        while (pos < pinned && ++assignment[pos] == m) assignment[pos++] = 0;
        if (pos == pinned) break;
    }
    return out;
}

DensityGradient graphon_density_gradient(const Graph& motif, const StepGraphon& w) {
    const int m = w.parts();
    DensityGradient out;
    out.value = graphon_density(motif, w);
    out.gradient.assign(m, std::vector(m, 0.0));
    const auto table = detail::value_table(w);
    const auto& edges = motif.edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        std::vector<Edge> rest;
        for (std::size_t o = 0; o < edges.size(); ++o)
            if (o != e) rest.push_back(edges[o]);
        const Graph without(motif.vertex_count(), std::move(rest));
        const Vertex pinned[2] = {edges[e].first, edges[e].second};
        PinnedPlan plan(without, pinned);
        detail::check_summation_budget(m, plan.free_count(), "graphon_density_gradient");
        for (int a = 0; a < m; ++a)
            for (int b = a; b < m; ++b) {
                const int ab[2] = {a, b};
                const int ba[2] = {b, a};
                long double d = plan.evaluate<long double>(ab, table);
                if (a != b) d += plan.evaluate<long double>(ba, table);
                const double term = static_cast<double>(d) * w.weight(a) * w.weight(b);
                out.gradient[a][b] += term;
                if (a != b) out.gradient[b][a] += term;
            }
    }
    return out;
}

DensityGradient doubling_density_gradient(const ColoredGraph& f, int k, const StepGraphon& w) {
    check_doubling_count(f, k);
    const auto table = detail::jet_table(w);
    DoublingEvaluator<Jet> evaluator(f, k, table);
    return unpack(evaluator.evaluate(k, 0, {}), w.parts());
}

}  // namespace forcing
