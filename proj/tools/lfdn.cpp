// Command-line front end: capacity regions, rate checks, min-cuts, vertex
// enumeration, source transmissibility, allocation checks and vertex-strategy
// simulation for linear finite-field deterministic networks.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lfdn/lfdn.hpp"

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::string subset_str(const std::vector<int>& nodes) {
    std::string out = "S={";
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(nodes[i]);
    }
    return out + "}";
}

std::vector<lfdn::Rational> parse_rational_list(const std::string& text) {
    std::vector<lfdn::Rational> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(lfdn::Rational::parse(item));
    if (out.empty()) throw std::invalid_argument("empty list");
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (const lfdn::Rational& r : parse_rational_list(text)) {
        if (!r.is_integer()) throw std::invalid_argument("expected integers, got " + r.str());
        out.push_back(static_cast<int>(r.num()));
    }
    return out;
}

json subset_json(const std::vector<int>& nodes) { return json(nodes); }

struct Options {
    std::string netfile;
    std::string srcfile;
    std::string rates;
    std::string alloc;
    std::string vertex;
    std::vector<int> relays;
    int source = 0;
    int slots = 64;
    std::uint64_t seed = 1;
    bool as_json = false;
    bool parallel = false;
};

int cmd_region(const Options& opt) {
    lfdn::Network net = lfdn::parse_network(read_file(opt.netfile));
    auto ineqs = lfdn::region(net, opt.parallel);
    if (opt.as_json) {
        json doc{{"command", "region"}, {"inequalities", json::array()}};
        for (const auto& iq : ineqs)
            doc["inequalities"].push_back({{"subset", subset_json(iq.subset)}, {"bound", iq.bound}});
        std::cout << doc.dump(2) << "\n";
    } else {
        for (const auto& iq : ineqs)
            std::cout << subset_str(iq.subset) << " bound=" << iq.bound << "\n";
    }
    return 0;
}

int cmd_check(const Options& opt) {
    lfdn::Network net = lfdn::parse_network(read_file(opt.netfile));
    lfdn::RateVector rates = parse_rational_list(opt.rates);

    const std::vector<int> sources = net.sources();
    for (int relay : opt.relays) {
        auto it = std::find(sources.begin(), sources.end(), relay);
        if (it == sources.end()) throw std::invalid_argument("relay is not a source node");
        std::size_t idx = static_cast<std::size_t>(it - sources.begin());
        if (idx < rates.size() && rates[idx] != lfdn::Rational(0))
            throw std::invalid_argument("nonzero rate given for relay node " + std::to_string(relay));
    }

    lfdn::RateCheck check = lfdn::check_rates(net, rates, opt.parallel);
    if (opt.as_json) {
        json doc{{"command", "check"}, {"feasible", check.feasible}, {"violations", json::array()}};
        json rj = json::array();
        for (const auto& r : rates) rj.push_back(r.str());
        doc["rates"] = rj;
        for (const auto& v : check.violations)
            doc["violations"].push_back({{"subset", subset_json(v.inequality.subset)},
                                         {"lhs", v.lhs.str()},
                                         {"bound", v.inequality.bound}});
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << (check.feasible ? "FEASIBLE" : "INFEASIBLE") << "\n";
        for (const auto& v : check.violations)
            std::cout << "violated " << subset_str(v.inequality.subset) << " (" << v.lhs.str()
                      << " > " << v.inequality.bound << ")\n";
    }
    return check.feasible ? 0 : 1;
}

int cmd_mincut(const Options& opt) {
    lfdn::Network net = lfdn::parse_network(read_file(opt.netfile));
    long long c = lfdn::min_cut_capacity(net, opt.source);
    if (opt.as_json)
        std::cout << json{{"command", "mincut"}, {"source", opt.source}, {"capacity", c}}.dump(2)
                  << "\n";
    else
        std::cout << c << "\n";
    return 0;
}

int cmd_vertices(const Options& opt) {
    lfdn::Network net = lfdn::parse_network(read_file(opt.netfile));
    auto verts = lfdn::enumerate_vertices(net, opt.relays);
    if (opt.as_json) {
        json doc{{"command", "vertices"}, {"vertices", json::array()}};
        for (const auto& v : verts) {
            json row = json::array();
            for (const auto& x : v) row.push_back(x.str());
            doc["vertices"].push_back(row);
        }
        std::cout << doc.dump(2) << "\n";
    } else {
        for (const auto& v : verts) {
            for (std::size_t i = 0; i < v.size(); ++i) std::cout << (i ? "," : "") << v[i].str();
            std::cout << "\n";
        }
    }
    return 0;
}

int cmd_transmissible(const Options& opt) {
    lfdn::Network net = lfdn::parse_network(read_file(opt.netfile));
    lfdn::CommonBitsSource src = lfdn::parse_source(read_file(opt.srcfile));
    lfdn::TransmissibilityCheck check = lfdn::transmissible(net, src);
    if (opt.as_json) {
        json doc{{"command", "transmissible"},
                 {"transmissible", check.transmissible},
                 {"violations", json::array()}};
        for (const auto& v : check.violations)
            doc["violations"].push_back(
                {{"subset", subset_json(v.subset)}, {"entropy", v.entropy}, {"bound", v.bound}});
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << (check.transmissible ? "YES" : "NO") << "\n";
        for (const auto& v : check.violations)
            std::cout << "violated " << subset_str(v.subset) << " (" << v.entropy << " > " << v.bound
                      << ")\n";
    }
    return check.transmissible ? 0 : 1;
}

int cmd_augment_check(const Options& opt) {
    lfdn::Network net = lfdn::parse_network(read_file(opt.netfile));
    std::vector<int> alloc = parse_int_list(opt.alloc);
    lfdn::AllocationCheck check = lfdn::allocation_feasible(net, alloc);
    lfdn::Augmentation aug = lfdn::build_augmented(net, alloc);

    struct Row {
        std::vector<int> subset;
        long long alloc_sum, cut_rank, virtual_bits, augmented_rank;
    };
    std::vector<Row> rows;
    for (const auto& iq : lfdn::region(net)) {
        Row row;
        row.subset = iq.subset;
        row.cut_rank = iq.bound;
        row.alloc_sum = 0;
        row.virtual_bits = 0;
        lfdn::Cut cut(iq.subset);
        for (std::size_t i = 0; i < aug.source_ids.size(); ++i) {
            if (cut.contains(aug.source_ids[i]))
                row.alloc_sum += aug.alloc[i];
            else
                row.virtual_bits += aug.alloc[i];
        }
        row.augmented_rank = lfdn::augmented_cut_rank(aug, iq.subset);
        rows.push_back(std::move(row));
    }

    if (opt.as_json) {
        json doc{{"command", "augment-check"},
                 {"feasible", check.feasible},
                 {"allocation", json(alloc)},
                 {"subsets", json::array()},
                 {"violations", json::array()}};
        for (const Row& r : rows)
            doc["subsets"].push_back({{"subset", subset_json(r.subset)},
                                      {"alloc_sum", r.alloc_sum},
                                      {"cut_rank", r.cut_rank},
                                      {"virtual_bits", r.virtual_bits},
                                      {"augmented_rank", r.augmented_rank}});
        for (const auto& v : check.violations)
            doc["violations"].push_back(
                {{"subset", subset_json(v.inequality.subset)}, {"lhs", v.lhs}, {"bound", v.inequality.bound}});
        std::cout << doc.dump(2) << "\n";
    } else {
        for (const Row& r : rows)
            std::cout << subset_str(r.subset) << " alloc_sum=" << r.alloc_sum
                      << " cut_rank=" << r.cut_rank << " virtual_bits=" << r.virtual_bits
                      << " augmented_rank=" << r.augmented_rank << "\n";
        std::cout << (check.feasible ? "FEASIBLE" : "INFEASIBLE") << "\n";
        for (const auto& v : check.violations)
            std::cout << "violated " << subset_str(v.inequality.subset) << " (" << v.lhs << " > "
                      << v.inequality.bound << ")\n";
    }
    return check.feasible ? 0 : 1;
}

int cmd_simulate(const Options& opt) {
    lfdn::Network net = lfdn::parse_network(read_file(opt.netfile));
    if (!lfdn::diamond_of(net))
        throw std::invalid_argument("simulate requires a four-node diamond with shift channels");
    if (opt.vertex.size() != 1)
        throw std::invalid_argument("vertex must be one of A, B, C, D, E");
    if (opt.slots < 1) throw std::invalid_argument("slots must be positive");

    lfdn::DiamondStrategy ds = lfdn::diamond_vertex_strategy(net, opt.vertex[0]);
    lfdn::SimTrace trace = lfdn::run(net, ds.strategy, opt.slots, opt.seed);
    lfdn::MeasureReport rep = lfdn::measure(trace, 1);

    if (opt.as_json) {
        json doc{{"command", "simulate"},
                 {"vertex", opt.vertex},
                 {"case", ds.classification.id},
                 {"mirrored", ds.classification.mirrored},
                 {"slots", opt.slots},
                 {"seed", opt.seed},
                 {"verdict", rep.zero_error ? "ACHIEVED" : "FAILED"},
                 {"nodes", json::array()}};
        for (const auto& m : rep.nodes)
            doc["nodes"].push_back({{"node", m.node},
                                    {"nominal", m.nominal.str()},
                                    {"achieved", m.achieved.str()},
                                    {"errors", m.error_bits}});
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << "vertex=" << opt.vertex << " case=" << ds.classification.id
                  << " mirrored=" << (ds.classification.mirrored ? "yes" : "no")
                  << " slots=" << opt.slots << " seed=" << opt.seed << "\n";
        std::cout << lfdn::render_report(rep);
    }
    return rep.zero_error ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"capacity analysis for linear finite-field deterministic networks"};
    app.require_subcommand(1);
    Options opt;

    auto* region_cmd = app.add_subcommand("region", "print all cut inequalities of the region");
    region_cmd->add_option("netfile", opt.netfile, "network file")->required();
    region_cmd->add_flag("--json", opt.as_json, "emit JSON");
    region_cmd->add_flag("--parallel", opt.parallel, "evaluate cuts concurrently");

    auto* check_cmd = app.add_subcommand("check", "test a rate vector for feasibility");
    check_cmd->add_option("netfile", opt.netfile, "network file")->required();
    check_cmd->add_option("--rates", opt.rates, "comma-separated rates (integers or p/q)")->required();
    check_cmd->add_option("--relay", opt.relays, "node whose rate is pinned to zero");
    check_cmd->add_flag("--json", opt.as_json, "emit JSON");
    check_cmd->add_flag("--parallel", opt.parallel, "evaluate cuts concurrently");

    auto* mincut_cmd = app.add_subcommand("mincut", "single-source min-cut capacity");
    mincut_cmd->add_option("netfile", opt.netfile, "network file")->required();
    mincut_cmd->add_option("--source", opt.source, "source node id")->required();
    mincut_cmd->add_flag("--json", opt.as_json, "emit JSON");

    auto* vertices_cmd = app.add_subcommand("vertices", "enumerate the region's vertices");
    vertices_cmd->add_option("netfile", opt.netfile, "network file")->required();
    vertices_cmd->add_option("--relay", opt.relays, "node whose rate is pinned to zero");
    vertices_cmd->add_flag("--json", opt.as_json, "emit JSON");

    auto* trans_cmd = app.add_subcommand("transmissible", "decide common-bits source transmissibility");
    trans_cmd->add_option("netfile", opt.netfile, "network file")->required();
    trans_cmd->add_option("srcfile", opt.srcfile, "source file")->required();
    trans_cmd->add_flag("--json", opt.as_json, "emit JSON");

    auto* aug_cmd = app.add_subcommand("augment-check", "verify an integer bit allocation");
    aug_cmd->add_option("netfile", opt.netfile, "network file")->required();
    aug_cmd->add_option("--alloc", opt.alloc, "comma-separated bits per source node")->required();
    aug_cmd->add_flag("--json", opt.as_json, "emit JSON");

    auto* sim_cmd = app.add_subcommand("simulate", "run a diamond vertex strategy");
    sim_cmd->add_option("netfile", opt.netfile, "network file (four-node diamond)")->required();
    sim_cmd->add_option("--vertex", opt.vertex, "vertex label A..E")->required();
    sim_cmd->add_option("--slots", opt.slots, "number of time slots (default 64)");
    sim_cmd->add_option("--seed", opt.seed, "message generator seed (default 1)");
    sim_cmd->add_flag("--json", opt.as_json, "emit JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (region_cmd->parsed()) return cmd_region(opt);
        if (check_cmd->parsed()) return cmd_check(opt);
        if (mincut_cmd->parsed()) return cmd_mincut(opt);
        if (vertices_cmd->parsed()) return cmd_vertices(opt);
        if (trans_cmd->parsed()) return cmd_transmissible(opt);
        if (aug_cmd->parsed()) return cmd_augment_check(opt);
        if (sim_cmd->parsed()) return cmd_simulate(opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
