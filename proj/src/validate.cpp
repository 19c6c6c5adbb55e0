#include "actsense/validate.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <tuple>

namespace actsense {

namespace {

void check_alphabets(const Plan& plan, const World& world) {
    for (const auto& u : plan.actions()) {
        if (world.actions().count(u) == 0) {
            throw AlphabetMismatch("plan action '" + u + "' is not a world action");
        }
    }
    for (const auto& y : plan.observations()) {
        if (world.observations().count(y) == 0) {
            throw AlphabetMismatch("plan observation '" + y + "' is not a world observation");
        }
    }
}

std::string pair_name(const ProductGraph& g, std::size_t n) {
    const auto& node = g.node(n);
    return "(" + g.plan().id(node.plan) + ", " + g.world().id(node.world) + ")";
}

struct Failure {
    Execution execution;
    int order;
    std::string reason;
};

void consider(std::optional<Failure>& best, Failure f) {
    if (!best || std::make_pair(f.execution.action_count(), f.order) <
                     std::make_pair(best->execution.action_count(), best->order)) {
        best = std::move(f);
    }
}

std::optional<Failure> first_uncovered(const ProductGraph& g) {
    if (g.uncovered_initial().empty()) {
        return std::nullopt;
    }
    const auto& y = g.uncovered_initial().front();
    return Failure{Execution(y), 0, "no initial plan state accepts initial observation '" + y + "'"};
}

std::optional<Failure> first_unsafe(const ProductGraph& g) {
    for (std::size_t n = 0; n < g.size(); ++n) {
        const auto& d = g.defects(n);
        if (!d.unsafe.empty()) {
            return Failure{g.shortest_execution(n), 1,
                           "action '" + d.unsafe.front() + "' is unavailable at " + pair_name(g, n)};
        }
    }
    return std::nullopt;
}

std::optional<Failure> first_unreceptive(const ProductGraph& g) {
    for (std::size_t n = 0; n < g.size(); ++n) {
        const auto& d = g.defects(n);
        if (!d.unreceptive.empty()) {
            const auto& [u, y] = d.unreceptive.front();
            return Failure{g.shortest_execution(n).extended(u, y), 2,
                           "observation '" + y + "' after '" + u + "' is not accepted at " +
                               pair_name(g, n)};
        }
    }
    return std::nullopt;
}

std::optional<Failure> first_goal_failure(const ProductGraph& g) {
    for (std::size_t n = 0; n < g.size(); ++n) {
        const auto& node = g.node(n);
        bool term = g.plan().is_terminating(node.plan);
        if (term && !g.world().is_goal(node.world)) {
            return Failure{g.shortest_execution(n), 3,
                           "plan terminates at non-goal pair " + pair_name(g, n)};
        }
        const auto& d = g.defects(n);
        if (!term && g.transitions(n).empty() && d.unsafe.empty() && d.unreceptive.empty()) {
            return Failure{g.shortest_execution(n), 3,
                           "execution stops without terminating at " + pair_name(g, n)};
        }
    }
    return std::nullopt;
}

// Iterative DFS; returns the node sequence of the first cycle found.
std::vector<std::size_t> find_cycle(const ProductGraph& g) {
    enum class Mark { White, Grey, Black };
    std::vector<Mark> mark(g.size(), Mark::White);
    for (std::size_t root = 0; root < g.size(); ++root) {
        if (mark[root] != Mark::White) {
            continue;
        }
        std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
        mark[root] = Mark::Grey;
        while (!stack.empty()) {
            auto& [n, next] = stack.back();
            auto out = g.transitions(n);
            if (next == out.size()) {
                mark[n] = Mark::Black;
                stack.pop_back();
                continue;
            }
            std::size_t t = out[next++].target;
            if (mark[t] == Mark::Grey) {
                // The cycle is the stack suffix starting at t.
                std::vector<std::size_t> cycle;
                bool inside = false;
                for (const auto& frame : stack) {
                    inside = inside || frame.first == t;
                    if (inside) {
                        cycle.push_back(frame.first);
                    }
                }
                return cycle;
            }
            if (mark[t] == Mark::White) {
                mark[t] = Mark::Grey;
                stack.emplace_back(t, 0);
            }
        }
    }
    return {};
}

FinitenessResult finiteness(const ProductGraph& g) {
    FinitenessResult result;
    auto cycle = find_cycle(g);
    if (cycle.empty()) {
        return result;
    }
    result.finite = false;
    Execution witness = g.shortest_execution(cycle.front());
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        std::size_t from = cycle[i];
        std::size_t to = cycle[(i + 1) % cycle.size()];
        for (const auto& tr : g.transitions(from)) {
            if (tr.target == to) {
                witness.append(tr.action, tr.obs);
                break;
            }
        }
    }
    for (auto n : cycle) {
        const auto& node = g.node(n);
        result.cycle.emplace_back(g.plan().id(node.plan), g.world().id(node.world));
    }
    result.witness = std::move(witness);
    return result;
}

CheckResult to_check(const std::optional<Failure>& f) {
    CheckResult r;
    if (f) {
        r.ok = false;
        r.counterexample = f->execution;
        r.reason = f->reason;
    }
    return r;
}

} // namespace

ProductGraph::ProductGraph(const Plan& plan, const World& world) : plan_(&plan), world_(&world) {
    std::map<ProductNode, std::size_t> index;
    std::deque<std::size_t> queue;

    auto visit = [&](ProductNode node, const Execution& via) {
        auto [it, inserted] = index.emplace(node, nodes_.size());
        if (inserted) {
            nodes_.push_back(node);
            reach_.push_back(via);
            out_.emplace_back();
            defects_.emplace_back();
            queue.push_back(it->second);
        }
        return it->second;
    };

    // Entries sorted by observation, then by (plan, world) target.
    std::vector<std::pair<Observation, ProductNode>> starts;
    for (auto w : world.initial_indices()) {
        bool accepted = false;
        for (auto p0 : plan.initial_indices()) {
            for (auto p : plan.successors(p0, world.obs(w))) {
                starts.emplace_back(world.obs(w), ProductNode{p, w});
                accepted = true;
            }
        }
        if (!accepted) {
            uncovered_.push_back(world.obs(w));
        }
    }
    std::sort(starts.begin(), starts.end());
    starts.erase(std::unique(starts.begin(), starts.end()), starts.end());
    std::sort(uncovered_.begin(), uncovered_.end());
    uncovered_.erase(std::unique(uncovered_.begin(), uncovered_.end()), uncovered_.end());
    for (const auto& [y, node] : starts) {
        entries_.push_back({y, visit(node, Execution(y))});
    }

    while (!queue.empty()) {
        std::size_t n = queue.front();
        queue.pop_front();
        ProductNode node = nodes_[n];
        std::vector<std::tuple<Action, Observation, ProductNode>> next;
        Defects defects;
        for (const auto& u : plan.label(node.plan)) {
            auto outcomes = world.successors(node.world, u);
            if (outcomes.empty()) {
                defects.unsafe.push_back(u);
                continue;
            }
            for (auto w2 : outcomes) {
                const auto& y = world.obs(w2);
                auto targets = plan.successors(node.plan, y);
                if (targets.empty()) {
                    defects.unreceptive.emplace_back(u, y);
                }
                for (auto p2 : targets) {
                    next.emplace_back(u, y, ProductNode{p2, w2});
                }
            }
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        std::sort(defects.unreceptive.begin(), defects.unreceptive.end());
        defects.unreceptive.erase(
            std::unique(defects.unreceptive.begin(), defects.unreceptive.end()),
            defects.unreceptive.end());
        defects_[n] = std::move(defects);
        std::vector<ProductTransition> out;
        for (const auto& [u, y, target] : next) {
            Execution via = reach_[n].extended(u, y);
            out.push_back({u, y, visit(target, via)});
        }
        out_[n] = std::move(out);
    }
}

std::optional<std::size_t> ProductGraph::find(const ProductNode& node) const {
    for (std::size_t n = 0; n < nodes_.size(); ++n) {
        if (nodes_[n] == node) {
            return n;
        }
    }
    return std::nullopt;
}

ProductGraph product_graph(const Plan& plan, const World& world) {
    check_alphabets(plan, world);
    return ProductGraph(plan, world);
}

CheckResult is_safe(const Plan& plan, const World& world) {
    return to_check(first_unsafe(product_graph(plan, world)));
}

CheckResult is_receptive(const Plan& plan, const World& world) {
    auto g = product_graph(plan, world);
    std::optional<Failure> best;
    if (auto f = first_uncovered(g)) {
        consider(best, *f);
    }
    if (auto f = first_unreceptive(g)) {
        consider(best, *f);
    }
    return to_check(best);
}

FinitenessResult is_finite_on(const Plan& plan, const World& world) {
    return finiteness(product_graph(plan, world));
}

SolutionReport evaluate_product(const ProductGraph& g) {
    SolutionReport report;
    std::optional<Failure> best;

    auto uncovered = first_uncovered(g);
    auto unsafe = first_unsafe(g);
    auto unreceptive = first_unreceptive(g);
    auto goal = first_goal_failure(g);
    auto fin = finiteness(g);

    report.covers_initial = !uncovered;
    report.safe = !unsafe;
    report.receptive = !uncovered && !unreceptive;
    report.reaches_goal = !goal;
    report.finite = fin.finite;
    report.verdict = report.covers_initial && report.safe && report.receptive &&
                     report.reaches_goal && report.finite;

    for (auto* f : {&uncovered, &unsafe, &unreceptive, &goal}) {
        if (*f) {
            consider(best, **f);
        }
    }
    if (!fin.finite) {
        consider(best, Failure{*fin.witness, 4, "joint-executions are unbounded (product cycle)"});
    }
    if (best) {
        report.counterexample = best->execution;
        report.reason = best->reason;
    }
    return report;
}

SolutionReport solves(const Plan& plan, const World& world) {
    auto scope = check_scope(world);
    if (!scope.passed()) {
        std::string msg = "world is outside the supported scope";
        for (const auto& p : scope.problems) {
            msg += "; " + p;
        }
        throw ScopeViolation(msg);
    }
    return evaluate_product(product_graph(plan, world));
}

JointLanguage joint_language(const Plan& plan, const World& world) {
    auto g = product_graph(plan, world);
    if (!finiteness(g).finite) {
        throw NotFinite("joint-executions of this plan and world are unbounded");
    }
    JointLanguage lang;
    struct Frame {
        std::size_t node;
        Execution execution;
    };
    std::vector<Frame> stack;
    for (const auto& e : g.entries()) {
        stack.push_back({e.target, Execution(e.obs)});
    }
    while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        const auto& node = g.node(f.node);
        if (plan.is_terminating(node.plan) && world.is_goal(node.world)) {
            lang.maximal.insert(f.execution);
        }
        for (const auto& tr : g.transitions(f.node)) {
            stack.push_back({tr.target, f.execution.extended(tr.action, tr.obs)});
        }
        lang.executions.insert(std::move(f.execution));
    }
    return lang;
}

namespace {

struct BoundExceeded {};

// Brute-force evaluation: every execution is grown one (action,
// observation) pair at a time and replayed on both structures. No pairs are
// shared between executions.
class ExecutionEnumerator {
public:
    ExecutionEnumerator(const Plan& plan, const World& world, std::size_t bound)
        : plan_(plan), world_(world), bound_(bound) {}

    void run(SolutionReport& r) {
        r.safe = r.receptive = r.reaches_goal = r.covers_initial = r.finite = true;
        report_ = &r;
        for (const auto& y : world_.observations()) {
            std::set<std::size_t> worlds;
            for (auto w : world_.initial_indices()) {
                if (world_.obs(w) == y) {
                    worlds.insert(w);
                }
            }
            if (worlds.empty()) {
                continue;
            }
            std::set<std::size_t> plans;
            for (auto p0 : plan_.initial_indices()) {
                for (auto p : plan_.successors(p0, y)) {
                    plans.insert(p);
                }
            }
            if (plans.empty()) {
                r.covers_initial = false;
                r.receptive = false;
                continue;
            }
            explore(Execution(y), worlds, plans);
        }
    }

    std::size_t count() const noexcept { return count_; }

private:
    void explore(const Execution& s, const std::set<std::size_t>& worlds,
                 const std::set<std::size_t>& plans) {
        ++count_;
        if (s.action_count() >= bound_) {
            throw BoundExceeded{};
        }
        auto& r = *report_;
        for (auto p : plans) {
            for (auto w : worlds) {
                if (plan_.is_terminating(p) && !world_.is_goal(w)) {
                    r.reaches_goal = false;
                }
                bool moves = false;
                bool defect = false;
                for (const auto& u : plan_.label(p)) {
                    auto outcomes = world_.successors(w, u);
                    if (outcomes.empty()) {
                        r.safe = false;
                        defect = true;
                    }
                    for (auto w2 : outcomes) {
                        if (plan_.successors(p, world_.obs(w2)).empty()) {
                            r.receptive = false;
                            defect = true;
                        } else {
                            moves = true;
                        }
                    }
                }
                if (!moves && !defect && !plan_.is_terminating(p)) {
                    r.reaches_goal = false;
                }
            }
        }

        ActionSet offered;
        for (auto p : plans) {
            offered.insert(plan_.label(p).begin(), plan_.label(p).end());
        }
        for (const auto& u : offered) {
            for (const auto& y : world_.observations()) {
                std::set<std::size_t> next_worlds;
                for (auto w : worlds) {
                    for (auto w2 : world_.successors(w, u)) {
                        if (world_.obs(w2) == y) {
                            next_worlds.insert(w2);
                        }
                    }
                }
                if (next_worlds.empty()) {
                    continue;
                }
                std::set<std::size_t> next_plans;
                for (auto p : plans) {
                    if (plan_.label(p).count(u) == 0) {
                        continue;
                    }
                    for (auto p2 : plan_.successors(p, y)) {
                        next_plans.insert(p2);
                    }
                }
                if (!next_plans.empty()) {
                    explore(s.extended(u, y), next_worlds, next_plans);
                }
            }
        }
    }

    const Plan& plan_;
    const World& world_;
    std::size_t bound_;
    SolutionReport* report_ = nullptr;
    std::size_t count_ = 0;
};

} // namespace

OracleReport oracle_check(const Plan& plan, const World& world, const Solver& solver) {
    OracleReport report;
    report.solver = solver(plan, world);
    report.bound = plan.size() * world.size() + 1;

    ExecutionEnumerator enumerator(plan, world, report.bound);
    try {
        enumerator.run(report.oracle);
    } catch (const BoundExceeded&) {
        report.bound_exceeded = true;
        report.oracle.finite = false;
    }
    report.executions_enumerated = enumerator.count();
    auto& o = report.oracle;
    o.verdict = !report.bound_exceeded && o.safe && o.receptive && o.finite && o.reaches_goal &&
                o.covers_initial;

    auto compare = [&](const char* name, bool a, bool b) {
        if (a != b) {
            report.mismatches.push_back(std::string(name) + ": oracle=" + (a ? "true" : "false") +
                                        " solver=" + (b ? "true" : "false"));
        }
    };
    compare("verdict", o.verdict, report.solver.verdict);
    compare("finite", o.finite, report.solver.finite);
    if (!report.bound_exceeded) {
        compare("safe", o.safe, report.solver.safe);
        compare("receptive", o.receptive, report.solver.receptive);
        compare("reaches_goal", o.reaches_goal, report.solver.reaches_goal);
        compare("covers_initial", o.covers_initial, report.solver.covers_initial);
    }
    return report;
}

} // namespace actsense
