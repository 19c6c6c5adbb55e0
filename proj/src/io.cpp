#include "actsense/io.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <nlohmann/json.hpp>

namespace actsense {

namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

std::string at_index(const std::string& path, std::size_t i) {
    return path + "[" + std::to_string(i) + "]";
}

std::string at_key(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

void expect_object(const json& j, const std::string& path,
                   std::initializer_list<const char*> required,
                   std::initializer_list<const char*> optional = {}) {
    if (!j.is_object()) {
        throw InvariantViolation(path, "expected an object");
    }
    for (const char* key : required) {
        if (!j.contains(key)) {
            throw InvariantViolation(at_key(path, key), "missing field");
        }
    }
    for (const auto& [key, _] : j.items()) {
        bool known = false;
        for (const char* k : required) {
            known = known || key == k;
        }
        for (const char* k : optional) {
            known = known || key == k;
        }
        if (!known) {
            throw InvariantViolation(at_key(path, key), "unknown field");
        }
    }
}

std::string get_string(const json& j, const std::string& path) {
    if (!j.is_string()) {
        throw InvariantViolation(path, "expected a string");
    }
    return j.get<std::string>();
}

const json& get_array(const json& j, const std::string& path) {
    if (!j.is_array()) {
        throw InvariantViolation(path, "expected an array");
    }
    return j;
}

std::set<std::string> get_set(const json& j, const std::string& path) {
    std::set<std::string> out;
    const auto& arr = get_array(j, path);
    for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!out.insert(get_string(arr[i], at_index(path, i))).second) {
            throw InvariantViolation(at_index(path, i), "duplicate entry '" + arr[i].get<std::string>() + "'");
        }
    }
    return out;
}

// Labels used on states/edges must be declared; check here so the error
// names the position in the file rather than in the sorted model.
void check_declared(const json& labels, const std::string& path, const std::set<std::string>& alphabet,
                    const char* what) {
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (alphabet.count(labels[i].get<std::string>()) == 0) {
            throw InvariantViolation(at_index(path, i),
                                     std::string("undeclared ") + what + " '" + labels[i].get<std::string>() + "'");
        }
    }
}

template <class Build>
auto rooted(const std::string& root, Build build) {
    try {
        return build();
    } catch (const InvariantViolation& e) {
        std::string what = e.what();
        std::string message = what.substr(std::min(what.size(), e.field().size() + 2));
        throw InvariantViolation(at_key(root, e.field()), message);
    }
}

World world_from_json(const json& body, const std::string& path) {
    expect_object(body, path, {"states", "initial", "goals", "edges"}, {"observations", "actions"});
    std::vector<WorldState> states;
    ObservationSet used_obs;
    const auto& jstates = get_array(body["states"], at_key(path, "states"));
    for (std::size_t i = 0; i < jstates.size(); ++i) {
        auto p = at_index(at_key(path, "states"), i);
        expect_object(jstates[i], p, {"id", "obs"});
        states.push_back({get_string(jstates[i]["id"], at_key(p, "id")), get_string(jstates[i]["obs"], at_key(p, "obs"))});
        used_obs.insert(states.back().obs);
    }
    std::vector<WorldEdge> edges;
    ActionSet used_actions;
    const auto& jedges = get_array(body["edges"], at_key(path, "edges"));
    for (std::size_t i = 0; i < jedges.size(); ++i) {
        auto p = at_index(at_key(path, "edges"), i);
        expect_object(jedges[i], p, {"from", "to", "actions"});
        WorldEdge e{get_string(jedges[i]["from"], at_key(p, "from")), get_string(jedges[i]["to"], at_key(p, "to")),
                    get_set(jedges[i]["actions"], at_key(p, "actions"))};
        used_actions.insert(e.actions.begin(), e.actions.end());
        edges.push_back(std::move(e));
    }
    auto observations = body.contains("observations")
                            ? get_set(body["observations"], at_key(path, "observations"))
                            : used_obs;
    auto actions = body.contains("actions") ? get_set(body["actions"], at_key(path, "actions")) : used_actions;
    for (std::size_t i = 0; i < jstates.size(); ++i) {
        auto p = at_index(at_key(path, "states"), i);
        if (observations.count(states[i].obs) == 0) {
            throw InvariantViolation(at_key(p, "obs"), "undeclared observation '" + states[i].obs + "'");
        }
    }
    for (std::size_t i = 0; i < jedges.size(); ++i) {
        check_declared(jedges[i]["actions"], at_key(at_index(at_key(path, "edges"), i), "actions"), actions, "action");
    }
    auto initial = get_set(body["initial"], at_key(path, "initial"));
    auto goals = get_set(body["goals"], at_key(path, "goals"));
    return rooted(path, [&] {
        return World(std::move(states), std::move(initial), std::move(goals), std::move(observations),
                     std::move(actions), std::move(edges));
    });
}

Plan plan_from_json(const json& body, const std::string& path) {
    expect_object(body, path, {"states", "initial", "terminating", "edges"}, {"actions", "observations"});
    std::vector<PlanState> states;
    ActionSet used_actions;
    const auto& jstates = get_array(body["states"], at_key(path, "states"));
    for (std::size_t i = 0; i < jstates.size(); ++i) {
        auto p = at_index(at_key(path, "states"), i);
        expect_object(jstates[i], p, {"id", "actions"});
        states.push_back({get_string(jstates[i]["id"], at_key(p, "id")),
                          get_set(jstates[i]["actions"], at_key(p, "actions"))});
        used_actions.insert(states.back().actions.begin(), states.back().actions.end());
    }
    std::vector<PlanEdge> edges;
    ObservationSet used_obs;
    const auto& jedges = get_array(body["edges"], at_key(path, "edges"));
    for (std::size_t i = 0; i < jedges.size(); ++i) {
        auto p = at_index(at_key(path, "edges"), i);
        expect_object(jedges[i], p, {"from", "to", "observations"});
        PlanEdge e{get_string(jedges[i]["from"], at_key(p, "from")), get_string(jedges[i]["to"], at_key(p, "to")),
                   get_set(jedges[i]["observations"], at_key(p, "observations"))};
        used_obs.insert(e.observations.begin(), e.observations.end());
        edges.push_back(std::move(e));
    }
    auto actions = body.contains("actions") ? get_set(body["actions"], at_key(path, "actions")) : used_actions;
    auto observations = body.contains("observations")
                            ? get_set(body["observations"], at_key(path, "observations"))
                            : used_obs;
    for (std::size_t i = 0; i < jstates.size(); ++i) {
        check_declared(jstates[i]["actions"], at_key(at_index(at_key(path, "states"), i), "actions"), actions,
                       "action");
    }
    for (std::size_t i = 0; i < jedges.size(); ++i) {
        check_declared(jedges[i]["observations"], at_key(at_index(at_key(path, "edges"), i), "observations"),
                       observations, "observation");
    }
    auto initial = get_set(body["initial"], at_key(path, "initial"));
    auto terminating = get_set(body["terminating"], at_key(path, "terminating"));
    return rooted(path, [&] {
        return Plan(std::move(states), std::move(initial), std::move(terminating), std::move(actions),
                    std::move(observations), std::move(edges));
    });
}

IndistinguishabilityConstraint constraint_from_json(const json& body, const std::string& path) {
    expect_object(body, path, {"classes"});
    IndistinguishabilityConstraint c;
    StateSet seen;
    const auto& jclasses = get_array(body["classes"], at_key(path, "classes"));
    for (std::size_t i = 0; i < jclasses.size(); ++i) {
        auto p = at_index(at_key(path, "classes"), i);
        auto cls = get_set(jclasses[i], p);
        if (cls.empty()) {
            throw InvariantViolation(p, "empty class");
        }
        for (std::size_t k = 0; k < jclasses[i].size(); ++k) {
            if (!seen.insert(jclasses[i][k].get<std::string>()).second) {
                throw InvariantViolation(at_index(p, k), "state appears in more than one class");
            }
        }
        c.classes.push_back(std::move(cls));
    }
    return c;
}

ordered to_json(const std::set<std::string>& s) {
    ordered arr = ordered::array();
    for (const auto& x : s) {
        arr.push_back(x);
    }
    return arr;
}

ordered to_json(const World& w) {
    ordered body;
    ordered states = ordered::array();
    for (const auto& s : w.states()) {
        states.push_back(ordered{{"id", s.id}, {"obs", s.obs}});
    }
    body["states"] = std::move(states);
    body["initial"] = to_json(w.initial());
    body["goals"] = to_json(w.goals());
    body["observations"] = to_json(w.observations());
    body["actions"] = to_json(w.actions());
    ordered edges = ordered::array();
    for (const auto& e : w.edges()) {
        edges.push_back(ordered{{"from", e.from}, {"to", e.to}, {"actions", to_json(e.actions)}});
    }
    body["edges"] = std::move(edges);
    return body;
}

ordered to_json(const Plan& p) {
    ordered body;
    ordered states = ordered::array();
    for (const auto& s : p.states()) {
        states.push_back(ordered{{"id", s.id}, {"actions", to_json(s.actions)}});
    }
    body["states"] = std::move(states);
    body["initial"] = to_json(p.initial());
    body["terminating"] = to_json(p.terminating());
    body["actions"] = to_json(p.actions());
    body["observations"] = to_json(p.observations());
    ordered edges = ordered::array();
    for (const auto& e : p.edges()) {
        edges.push_back(ordered{{"from", e.from}, {"to", e.to}, {"observations", to_json(e.observations)}});
    }
    body["edges"] = std::move(edges);
    return body;
}

ordered to_json(const IndistinguishabilityConstraint& c) {
    ordered classes = ordered::array();
    for (const auto& cls : c.classes) {
        classes.push_back(to_json(cls));
    }
    return ordered{{"classes", std::move(classes)}};
}

std::string major_of(const std::string& version) { return version.substr(0, version.find('.')); }

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

std::string Document::kind() const {
    switch (body.index()) {
        case 0:
            return "world";
        case 1:
            return "plan";
        default:
            return "constraint";
    }
}

Document parse_document(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1;
        std::size_t column = 1;
        std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        std::string what = e.what();
        auto colon = what.find(": ");
        throw ParseError(line, column, colon == std::string::npos ? what : what.substr(colon + 2));
    }
    expect_object(j, "", {"format_version", "kind", "body"});
    auto version = get_string(j["format_version"], "format_version");
    if (major_of(version) != major_of(kFormatVersion)) {
        throw VersionMismatch("unsupported format_version '" + version + "' (expected " + kFormatVersion + ")");
    }
    auto kind = get_string(j["kind"], "kind");
    if (kind == "world") {
        return Document{version, world_from_json(j["body"], "body")};
    }
    if (kind == "plan") {
        return Document{version, plan_from_json(j["body"], "body")};
    }
    if (kind == "constraint") {
        return Document{version, constraint_from_json(j["body"], "body")};
    }
    throw InvariantViolation("kind", "expected \"world\", \"plan\" or \"constraint\", got \"" + kind + "\"");
}

std::string dump_document(const Document& document) {
    ordered j;
    j["format_version"] = document.format_version;
    j["kind"] = document.kind();
    j["body"] = std::visit([](const auto& body) { return to_json(body); }, document.body);
    return j.dump(2) + "\n";
}

Document load(const std::filesystem::path& path) { return parse_document(read_file(path)); }

void save(const Document& document, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write '" + path.string() + "'");
    }
    out << dump_document(document);
    if (!out) {
        throw Error("error writing '" + path.string() + "'");
    }
}

namespace {

template <class T>
T load_kind(const std::filesystem::path& path, const char* kind) {
    auto doc = load(path);
    if (auto* body = std::get_if<T>(&doc.body)) {
        return std::move(*body);
    }
    throw InvariantViolation("kind", "expected a " + std::string(kind) + " document in '" + path.string() +
                                         "', got " + doc.kind());
}

} // namespace

World load_world(const std::filesystem::path& path) { return load_kind<World>(path, "world"); }
Plan load_plan(const std::filesystem::path& path) { return load_kind<Plan>(path, "plan"); }
IndistinguishabilityConstraint load_constraint(const std::filesystem::path& path) {
    return load_kind<IndistinguishabilityConstraint>(path, "constraint");
}

} // namespace actsense
