#include "pipeopt/pddl.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace pipeopt {

namespace {

void emit_domain(std::ostringstream& out, const GroupingTask& task) {
    const Cost intra = task.weights.intra;
    const Cost inter = task.weights.inter;

    out << ";; grouping with state-dependent assignment costs\n";
    out << ";; weights: intra=" << intra << " inter=" << inter
        << " group=" << task.weights.group_cost << "\n";
    out << "(define (domain pipeline-grouping)\n";
    out << "  (:requirements :strips :typing :negative-preconditions"
           " :conditional-effects :action-costs)\n";
    out << "  (:types operator image group tag)\n";
    out << "  (:predicates\n";
    out << "    (group-exists ?g - group)\n";
    out << "    (group-ready ?g - group)\n";
    out << "    (next-group ?g1 - group ?g2 - group)\n";
    out << "    (group-image ?g - group ?i - image)\n";
    out << "    (can-host ?g - group ?o - operator)\n";
    out << "    (assigned ?o - operator)\n";
    out << "    (in-group ?o - operator ?g - group)\n";
    out << "    (current-op ?o - operator)\n";
    out << "    (next-op ?o1 - operator ?o2 - operator)\n";
    out << "    (edge ?o1 - operator ?o2 - operator)\n";
    out << "    (requires-tag ?o - operator ?t - tag)\n";
    out << "    (supports-tag ?i - image ?t - tag)\n";
    out << "    (satisfies ?i - image ?o - operator))\n";
    out << "  (:functions (total-cost))\n";
    out << "  (:action create-group\n";
    out << "    :parameters (?g - group ?i - image)\n";
    out << "    :precondition (and (group-ready ?g) (not (group-exists ?g)))\n";
    out << "    :effect (and\n";
    out << "      (group-exists ?g)\n";
    out << "      (group-image ?g ?i)\n";
    out << "      (not (group-ready ?g))\n";
    out << "      (forall (?g2 - group) (when (next-group ?g ?g2) (group-ready ?g2)))\n";
    out << "      (forall (?o - operator) (when (satisfies ?i ?o) (can-host ?g ?o)))\n";
    out << "      (increase (total-cost) " << task.weights.group_cost << ")))\n";
    out << "  (:action assign-operator\n";
    out << "    :parameters (?o - operator ?g - group)\n";
    out << "    :precondition (and (current-op ?o) (group-exists ?g) (can-host ?g ?o))\n";
    out << "    :effect (and\n";
    out << "      (assigned ?o)\n";
    out << "      (in-group ?o ?g)\n";
    out << "      (not (current-op ?o))\n";
    out << "      (forall (?o2 - operator) (when (next-op ?o ?o2) (current-op ?o2)))\n";
    // each edge is charged when its later endpoint is assigned; both edge
    // directions are covered without double counting a single edge
    out << "      (forall (?j - operator)\n";
    out << "        (when (and (edge ?o ?j) (assigned ?j) (in-group ?j ?g))\n";
    out << "          (increase (total-cost) " << intra << ")))\n";
    out << "      (forall (?j - operator)\n";
    out << "        (when (and (edge ?j ?o) (assigned ?j) (in-group ?j ?g))\n";
    out << "          (increase (total-cost) " << intra << ")))\n";
    out << "      (forall (?j - operator)\n";
    out << "        (when (and (edge ?o ?j) (assigned ?j) (not (in-group ?j ?g)))\n";
    out << "          (increase (total-cost) " << inter << ")))\n";
    out << "      (forall (?j - operator)\n";
    out << "        (when (and (edge ?j ?o) (assigned ?j) (not (in-group ?j ?g)))\n";
    out << "          (increase (total-cost) " << inter << ")))))\n";
    out << ")\n";
}

void emit_problem(std::ostringstream& out, const GroupingTask& task) {
    const Pipeline& pipeline = task.pipeline;

    std::set<Tag> tags;
    for (const auto& op : pipeline.operators) {
        tags.insert(op.required_tags.begin(), op.required_tags.end());
    }
    for (const auto& img : task.images) tags.insert(img.tags.begin(), img.tags.end());

    out << "(define (problem grouping-task)\n";
    out << "  (:domain pipeline-grouping)\n";
    out << "  (:objects\n";
    out << "   ";
    for (const auto& op : pipeline.operators) out << ' ' << op.id;
    out << " - operator\n";
    out << "   ";
    for (const auto& img : task.images) out << ' ' << img.id;
    out << " - image\n";
    out << "   ";
    for (const auto& gid : task.group_ids) out << ' ' << gid;
    out << " - group\n";
    out << "   ";
    for (const auto& tag : tags) out << ' ' << tag;
    out << " - tag)\n";

    out << "  (:init\n";
    out << "    (= (total-cost) 0)\n";
    const std::size_t fixed = task.fixed_groups.size();
    if (fixed < task.max_groups) {
        out << "    (group-ready " << task.group_ids[fixed] << ")\n";
    }
    for (std::size_t k = fixed; k + 1 < task.max_groups; ++k) {
        out << "    (next-group " << task.group_ids[k] << ' ' << task.group_ids[k + 1]
            << ")\n";
    }
    for (const auto& g : task.fixed_groups) {
        out << "    (group-exists " << g.id << ")\n";
        out << "    (group-image " << g.id << ' ' << g.image.id << ")\n";
        for (const auto& op : pipeline.operators) {
            if (satisfies(g.image, op)) {
                out << "    (can-host " << g.id << ' ' << op.id << ")\n";
            }
        }
        for (const auto& oid : g.operator_ids) {
            out << "    (assigned " << oid << ")\n";
            out << "    (in-group " << oid << ' ' << g.id << ")\n";
        }
    }
    if (!task.order.empty()) {
        out << "    (current-op " << pipeline.operators[task.order[0]].id << ")\n";
        for (std::size_t p = 0; p + 1 < task.order.size(); ++p) {
            out << "    (next-op " << pipeline.operators[task.order[p]].id << ' '
                << pipeline.operators[task.order[p + 1]].id << ")\n";
        }
    }
    for (const auto& e : pipeline.edges) {
        out << "    (edge " << e.from << ' ' << e.to << ")\n";
    }
    for (const auto& op : pipeline.operators) {
        for (const auto& t : op.required_tags) {
            out << "    (requires-tag " << op.id << ' ' << t << ")\n";
        }
    }
    for (const auto& img : task.images) {
        for (const auto& t : img.tags) {
            out << "    (supports-tag " << img.id << ' ' << t << ")\n";
        }
    }
    for (const auto& img : task.images) {
        for (const auto& op : pipeline.operators) {
            if (satisfies(img, op)) {
                out << "    (satisfies " << img.id << ' ' << op.id << ")\n";
            }
        }
    }
    out << "  )\n";
    out << "  (:goal (and";
    for (const auto& op : pipeline.operators) out << " (assigned " << op.id << ")";
    out << "))\n";
    out << "  (:metric minimize (total-cost))\n";
    out << ")\n";
}

}  // namespace

PddlArtifacts emit_pddl(const GroupingTask& task) {
    if (task.pipeline.operators.empty()) {
        throw std::invalid_argument("cannot emit PDDL for an empty pipeline");
    }
    PddlArtifacts artifacts;
    std::ostringstream domain;
    emit_domain(domain, task);
    artifacts.domain_text = domain.str();
    std::ostringstream problem;
    emit_problem(problem, task);
    artifacts.problem_text = problem.str();
    return artifacts;
}

std::string serialize_plan(const Plan& plan) {
    std::ostringstream out;
    for (const auto& action : plan.actions) {
        out << '(' << action.name;
        for (const auto& arg : action.args) out << ' ' << arg;
        out << ")\n";
    }
    out << "; cost = " << plan.total_cost << "\n";
    return out.str();
}

namespace {

std::runtime_error plan_error(std::size_t line_no, const std::string& message) {
    return std::runtime_error("plan line " + std::to_string(line_no) + ": " + message);
}

}  // namespace

Plan parse_plan(const std::string& text, const GroupingTask& task) {
    std::set<std::string> known_names;
    std::set<std::pair<std::string, std::size_t>> known_arities;
    for (const auto& action : task.actions) {
        known_names.insert(action.name);
        known_arities.insert({action.name, action.args.size()});
    }

    Plan plan;
    State state = task.initial;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto comment = line.find(';');
        if (comment != std::string::npos) line.erase(comment);
        auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
        while (!line.empty() && is_space(line.back())) line.pop_back();
        std::size_t start = 0;
        while (start < line.size() && is_space(line[start])) ++start;
        if (start == line.size()) continue;

        if (line[start] != '(' || line.back() != ')') {
            throw plan_error(line_no, "malformed action line");
        }
        std::istringstream tokens(line.substr(start + 1, line.size() - start - 2));
        std::string name;
        tokens >> name;
        if (name.empty()) throw plan_error(line_no, "malformed action line");
        std::vector<std::string> args;
        std::string tok;
        while (tokens >> tok) args.push_back(tok);

        if (!known_names.count(name)) {
            throw plan_error(line_no, "unknown action " + name);
        }
        if (!known_arities.count({name, args.size()})) {
            throw plan_error(line_no, "wrong arity for " + name);
        }
        std::string sig = name;
        for (const auto& a : args) sig += ' ' + a;
        const ActionInstance* action = task.find_action(sig);
        if (action == nullptr) {
            throw plan_error(line_no, "unknown action instance (" + sig + ")");
        }
        if (!holds(state, action->pre)) {
            throw plan_error(line_no, "inapplicable action (" + sig + ")");
        }
        plan.total_cost += action->cost(state);
        state = pipeopt::apply(state, *action);
        plan.actions.push_back(*action);
    }
    if (!holds(state, task.goal)) {
        throw std::runtime_error("plan does not reach the goal");
    }
    return plan;
}

}  // namespace pipeopt
