#include "actsense/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "actsense/clip.hpp"
#include "actsense/io.hpp"
#include "actsense/progress.hpp"
#include "actsense/sensors.hpp"
#include "actsense/validate.hpp"

namespace actsense {

namespace {

using json = nlohmann::ordered_json;

json strings(const std::set<std::string>& s) {
    json arr = json::array();
    for (const auto& x : s) {
        arr.push_back(x);
    }
    return arr;
}

json executions(const std::vector<Execution>& chain) {
    json arr = json::array();
    for (const auto& e : chain) {
        arr.push_back(e.str());
    }
    return arr;
}

json operative_json(const OperativeActionSet& ops) {
    json j = json::object();
    for (const auto& [state, acts] : ops) {
        j[state] = strings(acts);
    }
    return j;
}

json measure_json(const ProgressMeasure& g) {
    json j = json::object();
    for (const auto& [state, value] : g.values) {
        j[state] = value;
    }
    return j;
}

json pairs_json(const ConeRelation& c) {
    json arr = json::array();
    for (const auto& [y, u] : c.pairs) {
        arr.push_back(json::array({y, u}));
    }
    return arr;
}

json cells_json(const SensorPartition& partition) {
    json j = json::object();
    for (const auto& [cell, states] : partition.cells()) {
        j[cell] = strings(states);
    }
    return j;
}

json crossovers_json(const std::vector<CrossoverConflict>& conflicts) {
    json arr = json::array();
    for (const auto& c : conflicts) {
        arr.push_back(json{{"states", json::array({c.state_a, c.state_b})},
                           {"witness_1", executions(c.witness_1)},
                           {"witness_2", executions(c.witness_2)}});
    }
    return arr;
}

std::string conflict_list(const std::vector<CrossoverConflict>& conflicts) {
    std::string s;
    for (const auto& c : conflicts) {
        s += (s.empty() ? "" : ", ") + std::string("{") + c.state_a + ", " + c.state_b + "}";
    }
    return s;
}

json report_json(const SolutionReport& r) {
    json j{{"verdict", r.verdict},         {"safe", r.safe},
           {"receptive", r.receptive},     {"finite", r.finite},
           {"reaches_goal", r.reaches_goal}, {"covers_initial", r.covers_initial}};
    j["counterexample"] = r.counterexample ? json(r.counterexample->str()) : json(nullptr);
    j["reason"] = r.reason;
    return j;
}

struct Context {
    std::ostream& out;
    std::ostream& err;

    void emit(const json& j) const { out << j.dump(2) << "\n"; }
};

// Emits a not-a-solution result and returns false when the plan fails.
bool require_solution(const Context& ctx, const Plan& plan, const World& world) {
    auto report = solves(plan, world);
    if (report.verdict) {
        return true;
    }
    ctx.emit(json{{"solution", false}, {"report", report_json(report)}});
    ctx.err << "plan does not solve the world: " << report.reason << "\n";
    return false;
}

int cmd_validate(const Context& ctx, const World& world, const Plan& plan) {
    auto report = solves(plan, world);
    ctx.emit(report_json(report));
    if (report.verdict) {
        ctx.err << "plan solves the world\n";
        return kExitOk;
    }
    ctx.err << "plan does not solve the world: " << report.reason << "\n";
    return kExitFalse;
}

int cmd_crossovers(const Context& ctx, const World& world, const Plan& plan) {
    if (!require_solution(ctx, plan, world)) {
        return kExitFalse;
    }
    auto conflicts = find_crossovers(plan, world);
    ctx.emit(json{{"crossover_free", conflicts.empty()}, {"conflicts", crossovers_json(conflicts)}});
    if (conflicts.empty()) {
        ctx.err << "no crossovers\n";
        return kExitOk;
    }
    ctx.err << conflicts.size() << " crossover(s): " << conflict_list(conflicts) << "\n";
    return kExitFalse;
}

int cmd_measure(const Context& ctx, const World& world, const Plan& plan) {
    if (!require_solution(ctx, plan, world)) {
        return kExitFalse;
    }
    try {
        auto g = compute_progress_measure(plan, world);
        auto check = verify_progress_measure(g, plan, world);
        ctx.emit(json{{"measure", measure_json(g)}, {"max", g.max_value()}, {"verified", check.ok}});
        ctx.err << "progress measure found, max " << g.max_value() << "\n";
        return check.ok ? kExitOk : kExitDefect;
    } catch (const CrossoverError& e) {
        ctx.emit(json{{"measure", nullptr}, {"crossovers", crossovers_json(e.conflicts())}});
        ctx.err << "no progress measure; crossovers: " << conflict_list(e.conflicts()) << "\n";
        return kExitFalse;
    }
}

int cmd_clip(const Context& ctx, const World& world, const Plan& plan, std::size_t max_reps) {
    ClipOptions options;
    options.max_representatives = max_reps;
    ClipStats stats;
    std::vector<Representative> reps;
    try {
        reps = clip(plan, world, options, &stats);
    } catch (const NoRepresentative& e) {
        ctx.emit(json{{"representatives", json::array()}, {"reason", e.what()}});
        ctx.err << e.what() << "\n";
        return kExitFalse;
    }
    json arr = json::array();
    for (const auto& rep : reps) {
        arr.push_back(json{{"operative", operative_json(rep.operative)}, {"measure", measure_json(rep.measure)}});
    }
    ctx.emit(json{{"count", reps.size()},
                  {"representatives", std::move(arr)},
                  {"stats",
                   {{"nodes_expanded", stats.nodes_expanded},
                    {"leaves_accepted", stats.leaves_accepted},
                    {"pruned", stats.pruned}}}});
    ctx.err << reps.size() << " representative(s)\n";
    return kExitOk;
}

int cmd_cones(const Context& ctx, const World& world, const Plan& plan) {
    auto families = all_sensors(plan, world);
    json arr = json::array();
    for (const auto& f : families) {
        json by_obs = json::object();
        for (const auto& y : f.relation.domain) {
            by_obs[y] = strings(f.relation.actions_for(y));
        }
        arr.push_back(json{{"representative", operative_json(f.representative)},
                           {"measure", measure_json(f.measure)},
                           {"pairs", pairs_json(f.relation)},
                           {"by_observation", std::move(by_obs)},
                           {"covering", f.relation.covers()},
                           {"operative_pairs", pairs_json(f.operative_relation)},
                           {"differs", f.relation != f.operative_relation}});
    }
    ctx.emit(json{{"relations", std::move(arr)}});
    ctx.err << families.size() << " cone relation(s)\n";
    return kExitOk;
}

int cmd_sensors(const Context& ctx, const World& world, const Plan& plan, const std::string& mode,
                bool count_only, std::optional<std::size_t> limit) {
    auto families = all_sensors(plan, world);
    json arr = json::array();
    std::uintmax_t total = 0;
    for (const auto& f : families) {
        json fam{{"representative", operative_json(f.representative)}};
        if (mode == "singleton") {
            auto stream = enumerate_singleton_sensors(f.relation);
            fam["count"] = stream.total();
            total = stream.total() > UINTMAX_MAX - total ? UINTMAX_MAX : total + stream.total();
            if (!count_only) {
                json sensors = json::array();
                std::size_t n = 0;
                while (!limit || n < *limit) {
                    auto s = stream.next();
                    if (!s) {
                        break;
                    }
                    json map = json::object();
                    for (const auto& [y, u] : s->action) {
                        map[y] = u;
                    }
                    sensors.push_back(json{{"index", n}, {"sensor", std::move(map)},
                                           {"cells", cells_json(to_partition(*s, world))}});
                    ++n;
                }
                fam["sensors"] = std::move(sensors);
            }
        } else {
            auto s = permissive_sensor(f.relation);
            fam["count"] = 1;
            total += 1;
            if (!count_only) {
                json map = json::object();
                for (const auto& [y, acts] : s.actions) {
                    map[y] = strings(acts);
                }
                fam["sensor"] = std::move(map);
                fam["cells"] = cells_json(to_partition(s, world));
            }
        }
        arr.push_back(std::move(fam));
    }
    ctx.emit(json{{"mode", mode}, {"total", total}, {"families", std::move(arr)}});
    ctx.err << total << " " << mode << " sensor(s) over " << families.size() << " family(ies)\n";
    return kExitOk;
}

int cmd_realizable(const Context& ctx, const World& world, const Plan& plan,
                   const IndistinguishabilityConstraint& constraint, std::size_t limit) {
    auto families = all_sensors(plan, world);
    bool any = false;
    json arr = json::array();
    for (const auto& f : families) {
        json fam{{"representative", operative_json(f.representative)}};
        auto stream = enumerate_singleton_sensors(f.operative_relation);
        std::size_t checked = 0;
        std::optional<std::pair<StateId, StateId>> first_violation;
        std::optional<SingletonSensor> found;
        while (checked < limit) {
            auto s = stream.next();
            if (!s) {
                break;
            }
            ++checked;
            auto verdict = is_realizable(to_partition(*s, world), constraint);
            if (verdict.realizable) {
                found = std::move(s);
                break;
            }
            if (!first_violation) {
                first_violation = verdict.violating_pair;
            }
        }
        fam["sensors_checked"] = checked;
        fam["realizable"] = found.has_value();
        if (found) {
            json map = json::object();
            for (const auto& [y, u] : found->action) {
                map[y] = u;
            }
            fam["sensor"] = std::move(map);
            fam["cells"] = cells_json(to_partition(*found, world));
            fam["violating_pair"] = nullptr;
        } else {
            fam["sensor"] = nullptr;
            fam["violating_pair"] = first_violation
                                        ? json::array({first_violation->first, first_violation->second})
                                        : json(nullptr);
        }
        any = any || found.has_value();
        arr.push_back(std::move(fam));
    }
    ctx.emit(json{{"realizable", any}, {"families", std::move(arr)}});
    ctx.err << (any ? "realizable under the constraint\n" : "not realizable under the constraint\n");
    return any ? kExitOk : kExitFalse;
}

int cmd_export_dot(const Context& ctx, const std::string& file, const std::string& out_path,
                   const std::string& igraph_world) {
    auto doc = load(file);
    std::string text;
    if (const auto* w = std::get_if<World>(&doc.body)) {
        text = export_dot(*w);
    } else if (const auto* p = std::get_if<Plan>(&doc.body)) {
        text = igraph_world.empty() ? export_dot(*p) : export_dot(build_igraph(*p, load_world(igraph_world)));
    } else {
        throw InvariantViolation("kind", "cannot export a " + doc.kind() + " document as DOT");
    }
    if (out_path.empty()) {
        ctx.out << text;
        return kExitOk;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!(f << text)) {
        throw Error("cannot write '" + out_path + "'");
    }
    ctx.err << "wrote " << out_path << "\n";
    return kExitOk;
}

int cmd_oracle(const Context& ctx, const World& world, const Plan& plan, std::size_t cap) {
    auto check = oracle_check(plan, world);
    json mismatches = json::array();
    for (const auto& m : check.mismatches) {
        mismatches.push_back(m);
    }
    json result{{"oracle_check",
                 {{"agree", check.agree()},
                  {"oracle_verdict", check.oracle.verdict},
                  {"solver_verdict", check.solver.verdict},
                  {"bound", check.bound},
                  {"bound_exceeded", check.bound_exceeded},
                  {"executions_enumerated", check.executions_enumerated},
                  {"mismatches", std::move(mismatches)}}}};
    bool agree = check.agree();
    if (check.solver.verdict) {
        try {
            auto expected = oracle_all_subplans(plan, world, cap);
            auto derived = derivable_subplans(clip(plan, world), world, cap);
            std::size_t missing = 0;
            for (const auto& s : expected) {
                missing += derived.count(s) == 0;
            }
            std::size_t extra = 0;
            for (const auto& s : derived) {
                extra += expected.count(s) == 0;
            }
            result["subplans"] = json{{"skipped", false},
                                      {"oracle_count", expected.size()},
                                      {"clip_derivable_count", derived.size()},
                                      {"missing_from_clip", missing},
                                      {"extra_in_clip", extra},
                                      {"agree", missing == 0 && extra == 0}};
            agree = agree && missing == 0 && extra == 0;
        } catch (const CapExceeded& e) {
            result["subplans"] = json{{"skipped", true}, {"reason", e.what()}};
        }
    } else {
        result["subplans"] = json{{"skipped", true}, {"reason", "plan is not a solution"}};
    }
    ctx.emit(result);
    ctx.err << (agree ? "oracle agrees\n" : "ORACLE DISAGREEMENT\n");
    return agree ? kExitOk : kExitDefect;
}

int report_error(const Context& ctx, const char* type, const std::exception& e, int code) {
    ctx.emit(json{{"error", type}, {"message", e.what()}});
    ctx.err << "error: " << e.what() << "\n";
    return code;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Context ctx{out, err};
    CLI::App app{"Analyse plans, progress measures and action-based sensors", "actsense"};
    app.require_subcommand(1);

    std::string world_path;
    std::string plan_path;
    auto add_pair = [&](CLI::App* sub) {
        sub->add_option("world", world_path, "world document")->required();
        sub->add_option("plan", plan_path, "plan document")->required();
    };

    auto* validate = app.add_subcommand("validate", "check that a plan solves a world");
    add_pair(validate);
    auto* crossovers = app.add_subcommand("crossovers", "list crossover conflicts");
    add_pair(crossovers);
    auto* measure = app.add_subcommand("measure", "compute the canonical progress measure");
    add_pair(measure);

    auto* clip_cmd = app.add_subcommand("clip", "crossover-free representative sub-plans");
    add_pair(clip_cmd);
    std::size_t max_reps = std::numeric_limits<std::size_t>::max();
    clip_cmd->add_option("--max-representatives", max_reps, "stop after N representatives")
        ->check(CLI::PositiveNumber);

    auto* cones = app.add_subcommand("cones", "cone relations of every representative");
    add_pair(cones);

    auto* sensors = app.add_subcommand("sensors", "enumerate action-based sensors");
    add_pair(sensors);
    std::string mode;
    bool count_only = false;
    std::optional<std::size_t> limit;
    sensors->add_option("--mode", mode, "singleton or permissive")
        ->required()
        ->check(CLI::IsMember({"singleton", "permissive"}));
    sensors->add_flag("--count-only", count_only, "print counts only");
    sensors->add_option("--limit", limit, "at most N sensors per family");

    auto* realizable = app.add_subcommand("realizable", "check sensor partitions against a constraint");
    add_pair(realizable);
    std::string constraint_path;
    std::size_t realizable_limit = 100000;
    realizable->add_option("--constraint", constraint_path, "constraint document")->required();
    realizable->add_option("--limit", realizable_limit, "at most N sensors checked per family");

    auto* dot = app.add_subcommand("export-dot", "render a world, plan or I-Graph as DOT");
    std::string dot_file;
    std::string dot_out;
    std::string igraph_world;
    dot->add_option("file", dot_file, "world or plan document")->required();
    dot->add_option("--out", dot_out, "write to this path instead of standard output");
    dot->add_option("--igraph-world", igraph_world, "render the plan's I-Graph against this world");

    auto* oracle = app.add_subcommand("oracle", "cross-check the solver and CLIP by brute force");
    add_pair(oracle);
    std::size_t cap = std::size_t{1} << 20;
    oracle->add_option("--cap", cap, "maximum number of sub-plans to enumerate");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*dot) {
            return cmd_export_dot(ctx, dot_file, dot_out, igraph_world);
        }
        auto world = load_world(world_path);
        auto plan = load_plan(plan_path);
        if (*validate) {
            return cmd_validate(ctx, world, plan);
        }
        if (*crossovers) {
            return cmd_crossovers(ctx, world, plan);
        }
        if (*measure) {
            return cmd_measure(ctx, world, plan);
        }
        if (*clip_cmd) {
            return cmd_clip(ctx, world, plan, max_reps);
        }
        if (*cones) {
            return cmd_cones(ctx, world, plan);
        }
        if (*sensors) {
            return cmd_sensors(ctx, world, plan, mode, count_only, limit);
        }
        if (*realizable) {
            return cmd_realizable(ctx, world, plan, load_constraint(constraint_path), realizable_limit);
        }
        return cmd_oracle(ctx, world, plan, cap);
    } catch (const NotASolution& e) {
        return report_error(ctx, "NotASolution", e, kExitFalse);
    } catch (const ParseError& e) {
        return report_error(ctx, "ParseError", e, kExitUsage);
    } catch (const VersionMismatch& e) {
        return report_error(ctx, "VersionMismatch", e, kExitUsage);
    } catch (const InvariantViolation& e) {
        return report_error(ctx, "InvariantViolation", e, kExitUsage);
    } catch (const ScopeViolation& e) {
        return report_error(ctx, "ScopeViolation", e, kExitUsage);
    } catch (const AlphabetMismatch& e) {
        return report_error(ctx, "AlphabetMismatch", e, kExitUsage);
    } catch (const PartitionMismatch& e) {
        return report_error(ctx, "PartitionMismatch", e, kExitUsage);
    } catch (const CapExceeded& e) {
        return report_error(ctx, "CapExceeded", e, kExitUsage);
    } catch (const Error& e) {
        return report_error(ctx, "Error", e, kExitUsage);
    } catch (const std::exception& e) {
        return report_error(ctx, "InternalError", e, kExitDefect);
    }
}

} // namespace actsense
