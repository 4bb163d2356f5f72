#include "mrplan/scenario_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mrplan {

using nlohmann::json;

namespace {

void require_keys(const json& obj, const std::string& where,
                  std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional = {}) {
    for (const char* k : required)
        if (!obj.contains(k)) throw InputError(where + ": missing key '" + k + "'");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : required)
            if (it.key() == k) known = true;
        for (const char* k : optional)
            if (it.key() == k) known = true;
        if (!known) throw InputError(where + ": unknown key '" + it.key() + "'");
    }
}

CostVector parse_cost(const json& j, const std::string& where) {
    if (!j.is_array()) throw InputError(where + ": expected an array of numbers");
    CostVector c;
    for (const auto& x : j) {
        if (!x.is_number()) throw InputError(where + ": expected an array of numbers");
        c.push_back(x.get<double>());
    }
    return c;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("parse error: ") + e.what() + " (byte " +
                         std::to_string(e.byte) + ")");
    }
    if (!j.is_object()) throw InputError("scenario: top level must be an object");
    require_keys(j, "scenario",
                 {"format", "objectives", "graph", "contexts", "true_context", "landmarks",
                  "robots", "initial_belief"},
                 {"stochastic"});

    if (!j["format"].is_number_integer() || j["format"].get<int>() != 1)
        throw InputError("format: expected version 1, got " + j["format"].dump());

    Scenario s;
    for (const auto& o : j["objectives"]) s.objectives.push_back(o.get<std::string>());

    const json& g = j["graph"];
    require_keys(g, "graph", {"vertices", "edges", "wait_costs"});
    for (const auto& v : g["vertices"]) {
        require_keys(v, "graph.vertices[]", {"id"}, {"x", "y"});
        std::optional<std::pair<double, double>> coords;
        if (v.contains("x") != v.contains("y"))
            throw InputError("graph.vertices['" + v["id"].get<std::string>() +
                             "']: x and y must be given together");
        if (v.contains("x")) coords = {v["x"].get<double>(), v["y"].get<double>()};
        s.graph.add_vertex(v["id"].get<std::string>(), coords);
    }
    for (const auto& e : g["edges"]) {
        require_keys(e, "graph.edges[]", {"from", "to", "cost"});
        std::string from = e["from"].get<std::string>();
        std::string to = e["to"].get<std::string>();
        if (s.graph.index_of(from) < 0) throw InputError("graph.edges[]: unknown vertex '" + from + "'");
        if (s.graph.index_of(to) < 0) throw InputError("graph.edges[]: unknown vertex '" + to + "'");
        s.graph.add_edge(from, to, parse_cost(e["cost"], "graph.edges[].cost"));
    }
    for (auto it = g["wait_costs"].begin(); it != g["wait_costs"].end(); ++it) {
        int v = s.graph.index_of(it.key());
        if (v < 0) throw InputError("graph.wait_costs: unknown vertex '" + it.key() + "'");
        s.graph.wait_cost[v] = parse_cost(it.value(), "graph.wait_costs['" + it.key() + "']");
    }

    if (j.contains("stochastic")) {
        StochasticModel m;
        for (const auto& e : j["stochastic"]) {
            require_keys(e, "stochastic[]", {"from", "action", "cost", "outcomes"});
            StochasticAction a;
            a.name = e["action"].get<std::string>();
            a.cost = parse_cost(e["cost"], "stochastic[].cost");
            for (auto it = e["outcomes"].begin(); it != e["outcomes"].end(); ++it)
                a.outcomes.emplace_back(it.key(), it.value().get<double>());
            m.actions[e["from"].get<std::string>()].push_back(std::move(a));
        }
        s.stochastic = std::move(m);
    }

    for (const auto& c : j["contexts"]) {
        require_keys(c, "contexts[]", {"id", "ordering"});
        Context ctx;
        ctx.id = c["id"].get<std::string>();
        for (const auto& name : c["ordering"]) {
            int idx = s.objective_index(name.get<std::string>());
            if (idx < 0)
                throw InputError("contexts['" + ctx.id + "'].ordering: unknown objective '" +
                                 name.get<std::string>() + "'");
            ctx.ordering.priority.push_back(idx);
        }
        s.contexts.push_back(std::move(ctx));
    }

    s.true_context = j["true_context"].get<std::string>();

    for (const auto& l : j["landmarks"]) {
        require_keys(l, "landmarks[]", {"id", "site", "tiers"});
        LandmarkSpec lm;
        lm.id = l["id"].get<std::string>();
        for (const auto& v : l["site"]) lm.site.push_back(v.get<std::string>());
        for (const auto& t : l["tiers"]) {
            require_keys(t, "landmarks[].tiers[]", {"min_robots", "partition"});
            Tier tier;
            tier.min_robots = t["min_robots"].get<int>();
            for (const auto& cell : t["partition"]) {
                std::vector<std::string> c;
                for (const auto& cid : cell) c.push_back(cid.get<std::string>());
                tier.partition.push_back(std::move(c));
            }
            lm.tiers.push_back(std::move(tier));
        }
        s.landmarks.push_back(std::move(lm));
    }

    for (const auto& r : j["robots"]) {
        require_keys(r, "robots[]", {"id", "start", "goal"});
        s.robots.push_back(RobotSpec{r["id"].get<std::string>(), r["start"].get<std::string>(),
                                     r["goal"].get<std::string>()});
    }

    for (auto it = j["initial_belief"].begin(); it != j["initial_belief"].end(); ++it)
        s.initial_belief[it.key()] = it.value().get<double>();

    validate_or_throw(s);
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string scenario_to_json(const Scenario& s) {
    json j;
    j["format"] = 1;
    j["objectives"] = s.objectives;

    json verts = json::array();
    for (const auto& v : s.graph.vertices) {
        json jv;
        jv["id"] = v.id;
        if (v.has_coords) {
            jv["x"] = v.x;
            jv["y"] = v.y;
        }
        verts.push_back(std::move(jv));
    }
    json edges = json::array();
    for (const auto& adj : s.graph.out)
        for (const auto& e : adj)
            edges.push_back({{"from", s.graph.id_of(e.from)},
                             {"to", s.graph.id_of(e.to)},
                             {"cost", e.cost}});
    json waits = json::object();
    for (int v = 0; v < s.graph.size(); ++v) waits[s.graph.id_of(v)] = s.graph.wait_cost[v];
    j["graph"] = {{"vertices", verts}, {"edges", edges}, {"wait_costs", waits}};

    if (s.stochastic) {
        json st = json::array();
        for (const auto& [from, acts] : s.stochastic->actions)
            for (const auto& a : acts) {
                json outcomes = json::object();
                for (const auto& [succ, p] : a.outcomes) outcomes[succ] = p;
                st.push_back({{"from", from}, {"action", a.name}, {"cost", a.cost},
                              {"outcomes", outcomes}});
            }
        j["stochastic"] = st;
    }

    json ctxs = json::array();
    for (const auto& c : s.contexts) {
        json ord = json::array();
        for (int idx : c.ordering.priority) ord.push_back(s.objectives[idx]);
        ctxs.push_back({{"id", c.id}, {"ordering", ord}});
    }
    j["contexts"] = ctxs;
    j["true_context"] = s.true_context;

    json lms = json::array();
    for (const auto& lm : s.landmarks) {
        json tiers = json::array();
        for (const auto& t : lm.tiers)
            tiers.push_back({{"min_robots", t.min_robots}, {"partition", t.partition}});
        lms.push_back({{"id", lm.id}, {"site", lm.site}, {"tiers", tiers}});
    }
    j["landmarks"] = lms;

    json robots = json::array();
    for (const auto& r : s.robots)
        robots.push_back({{"id", r.id}, {"start", r.start}, {"goal", r.goal}});
    j["robots"] = robots;

    json belief = json::object();
    for (const auto& [cid, p] : s.initial_belief) belief[cid] = p;
    j["initial_belief"] = belief;

    return j.dump(2);
}

void save_scenario(const Scenario& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write scenario file '" + path + "'");
    out << scenario_to_json(s) << "\n";
}

}  // namespace mrplan
