#include <sstream>

#include "actsense/io.hpp"

namespace actsense {

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        if (c == '"' || c == '\\') {
            out += '\\';
        }
        out += c;
    }
    return out + "\"";
}

std::string join(const std::set<std::string>& items) {
    std::string out;
    for (const auto& x : items) {
        out += (out.empty() ? "" : ",") + x;
    }
    return out;
}

} // namespace

std::string export_dot(const World& world) {
    std::ostringstream out;
    out << "digraph world {\n  rankdir=LR;\n  node [shape=circle];\n";
    for (std::size_t v = 0; v < world.size(); ++v) {
        out << "  " << quote(world.id(v)) << " [label=" << quote(world.id(v) + "\n" + world.obs(v));
        if (world.is_goal(v)) {
            out << ", shape=doublecircle";
        }
        out << "];\n";
    }
    for (const auto& e : world.edges()) {
        out << "  " << quote(e.from) << " -> " << quote(e.to) << " [label=" << quote(join(e.actions)) << "];\n";
    }
    out << "}\n";
    return out.str();
}

std::string export_dot(const Plan& plan) {
    std::ostringstream out;
    out << "digraph plan {\n  rankdir=LR;\n  node [shape=box];\n";
    for (std::size_t p = 0; p < plan.size(); ++p) {
        out << "  " << quote(plan.id(p)) << " [label=" << quote(plan.id(p) + "\n{" + join(plan.label(p)) + "}");
        if (plan.is_initial(p)) {
            out << ", shape=point, xlabel=" << quote(plan.id(p));
        } else if (plan.is_terminating(p)) {
            out << ", shape=doublecircle";
        }
        out << "];\n";
    }
    for (const auto& e : plan.edges()) {
        out << "  " << quote(e.from) << " -> " << quote(e.to) << " [label=" << quote(join(e.observations))
            << "];\n";
    }
    out << "}\n";
    return out.str();
}

std::string export_dot(const IGraph& igraph) {
    auto plan_node = [](std::size_t v) { return "p" + std::to_string(v); };
    auto world_node = [](std::size_t i) { return "w" + std::to_string(i); };
    const auto& vertices = igraph.vertices();
    const auto& action_edges = igraph.action_edges();

    std::ostringstream out;
    out << "digraph igraph {\n  rankdir=TB;\n  newrank=true;\n";
    out << "  subgraph cluster_init {\n    label=\"initiating\";\n    style=dashed;\n";
    out << "    init [shape=point];\n  }\n";

    out << "  subgraph cluster_plan {\n    label=\"plan\";\n    node [shape=box];\n";
    for (std::size_t v = 0; v < vertices.size(); ++v) {
        const auto& vx = vertices[v];
        out << "    " << plan_node(v) << " [label="
            << quote(vx.world_state + "\n{" + join(igraph.actions(v)) + "}\n[" + join(vx.plan_states) + "]");
        if (vx.goal) {
            out << ", peripheries=2";
        }
        out << "];\n";
    }
    out << "  }\n";

    out << "  subgraph cluster_world {\n    label=\"world\";\n    node [shape=ellipse, style=filled, fillcolor=lightgrey];\n";
    for (std::size_t i = 0; i < action_edges.size(); ++i) {
        const auto& e = action_edges[i];
        out << "    " << world_node(i) << " [label=" << quote(vertices[e.source].world_state + "," + e.action)
            << "];\n";
    }
    out << "  }\n";

    for (const auto& e : igraph.init_edges()) {
        out << "  init -> " << plan_node(e.target) << " [label=" << quote(e.obs) << "];\n";
    }
    for (std::size_t i = 0; i < action_edges.size(); ++i) {
        out << "  " << plan_node(action_edges[i].source) << " -> " << world_node(i)
            << " [label=" << quote(action_edges[i].action) << "];\n";
    }
    for (const auto& e : igraph.outcome_edges()) {
        std::size_t i = 0;
        while (i < action_edges.size() && !(action_edges[i] == e.from)) {
            ++i;
        }
        out << "  " << world_node(i) << " -> " << plan_node(e.target) << " [label=" << quote(e.obs)
            << ", style=dashed];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace actsense
