#include <catch2/catch_amalgamated.hpp>

#include "lfdn/cutset.hpp"
#include "lfdn/sim.hpp"
#include "testutil.hpp"

using namespace lfdn;

namespace {

Network sample_diamond() { return make_diamond_network(2, 3, 4, 1); }

/// Encoder placing the slot's fresh bits on the top levels, nothing else.
EncoderSpec fresh_bits_encoder(int node, int rate, int q) {
    return {node, rate, [rate, q](int slot, const BitVec& msg, std::span<const BitVec>) {
                BitVec x(static_cast<std::size_t>(q), 0);
                for (int k = 0; k < rate; ++k)
                    x[static_cast<std::size_t>(k)] =
                        msg[static_cast<std::size_t>((slot - 1) * rate + k)];
                return x;
            }};
}

/// Decoder reading the given node's bits straight off the top of y_d.
DecodeFn top_level_decoder(int node, int rate) {
    return [node, rate](int slot, std::span<const BitVec> dh) {
        const BitVec& y = dh[static_cast<std::size_t>(slot - 1)];
        BitVec bits(y.begin(), y.begin() + rate);
        return std::vector<DecodeEvent>{{node, slot, bits}};
    };
}

}  // namespace

TEST_CASE("point-to-point delivery") {
    Network net = parse_network("node 1\nnode 2 dest\nlink 1 2 3\n");
    Strategy s;
    s.encoders = {fresh_bits_encoder(1, 3, 3)};
    s.decode = top_level_decoder(1, 3);

    SimTrace trace = run(net, s, 16, 5);
    MeasureReport rep = measure(trace, 0);
    REQUIRE(rep.zero_error);
    REQUIRE(rep.nodes.size() == 1);
    REQUIRE(rep.nodes[0].achieved == Rational(3));
    REQUIRE(rep.nodes[0].error_bits == 0);
}

TEST_CASE("silent network") {
    Network net = parse_network("node 1\nnode 2 dest\nlink 1 2 3\n");
    Strategy s;
    s.encoders = {{1, 0, [](int, const BitVec&, std::span<const BitVec>) { return BitVec(3, 0); }}};
    s.decode = nullptr;

    SimTrace trace = run(net, s, 8, 1);
    for (const SlotRecord& rec : trace.records) {
        REQUIRE(rec.received.at(2) == BitVec(3, 0));
        REQUIRE(rec.decoded.empty());
    }
    MeasureReport rep = measure(trace, 0);
    REQUIRE(rep.nodes[0].achieved == Rational(0));
}

TEST_CASE("colliding senders corrupt each other") {
    Network net = parse_network("node 1\nnode 2\nnode 3 dest\nlink 1 3 2\nlink 2 3 2\n");
    Strategy s;
    s.encoders = {fresh_bits_encoder(1, 2, 2), fresh_bits_encoder(2, 2, 2)};
    s.decode = top_level_decoder(1, 2);  // pretends node 2 is silent

    MeasureReport rep = measure(run(net, s, 32, 9), 0);
    REQUIRE_FALSE(rep.zero_error);
    REQUIRE(rep.nodes[0].error_bits > 0);
}

TEST_CASE("strict causality is structural") {
    Network net = parse_network("node 1\nnode 2 dest\nlink 1 2 1\n");
    std::vector<std::size_t> seen;
    Strategy s;
    s.encoders = {{1, 0, [&seen](int, const BitVec&, std::span<const BitVec> history) {
                       seen.push_back(history.size());
                       return BitVec(1, 0);
                   }}};
    run(net, s, 5, 0);
    REQUIRE(seen == std::vector<std::size_t>{0, 1, 2, 3, 4});
}

TEST_CASE("encoder output length is checked") {
    Network net = parse_network("node 1\nnode 2 dest\nlink 1 2 2\n");
    Strategy s;
    s.encoders = {{1, 0, [](int, const BitVec&, std::span<const BitVec>) { return BitVec(1, 0); }}};
    REQUIRE_THROWS_AS(run(net, s, 2, 0), std::runtime_error);
}

TEST_CASE("simulation is deterministic") {
    DiamondStrategy ds = diamond_vertex_strategy(sample_diamond(), 'A');
    SimTrace a = run(sample_diamond(), ds.strategy, 64, 1234);
    SimTrace b = run(sample_diamond(), ds.strategy, 64, 1234);
    REQUIRE(a == b);
    REQUIRE(render_report(measure(a, 1)) == render_report(measure(b, 1)));

    SimTrace c = run(sample_diamond(), ds.strategy, 64, 1235);
    REQUIRE(a.messages != c.messages);
}

TEST_CASE("diamond_case") {
    DiamondCase c2 = diamond_case(2, 3, 4, 1);
    REQUIRE(c2.id == 2);
    REQUIRE_FALSE(c2.mirrored);

    REQUIRE(diamond_case(1, 5, 6, 1).id == 1);
    REQUIRE(diamond_case(3, 3, 4, 2).id == 3);

    DiamondCase m = diamond_case(3, 2, 1, 4);  // relay roles swapped
    REQUIRE(m.mirrored);
    REQUIRE(m.id == 2);

    REQUIRE_THROWS_AS(diamond_case(3, 2, 4, 1), std::invalid_argument);
}

TEST_CASE("sample_diamond vertex rates") {
    auto rates_of = [&](char v) {
        DiamondStrategy ds = diamond_vertex_strategy(sample_diamond(), v);
        return std::vector<int>{ds.rates.at(1), ds.rates.at(2), ds.rates.at(3)};
    };
    REQUIRE(rates_of('A') == std::vector<int>{2, 1, 1});
    REQUIRE(rates_of('D') == std::vector<int>{3, 1, 0});
    REQUIRE(rates_of('E') == std::vector<int>{3, 1, 0});  // degenerate with D here
    REQUIRE(rates_of('B') == std::vector<int>{0, 4, 0});
    REQUIRE(rates_of('C') == std::vector<int>{0, 3, 1});
    REQUIRE_THROWS_AS(diamond_vertex_strategy(sample_diamond(), 'F'), std::invalid_argument);
}

TEST_CASE("vertex E needs case 2 or 3") {
    REQUIRE_THROWS_AS(diamond_vertex_strategy(1, 5, 6, 1, 'E'), std::invalid_argument);
}

TEST_CASE("sample_diamond vertices achieve nominal rates") {
    Network net = sample_diamond();
    for (char v : diamond_vertex_labels(2)) {
        DiamondStrategy ds = diamond_vertex_strategy(net, v);
        SimTrace trace = run(net, ds.strategy, 64, 42);
        MeasureReport rep = measure(trace, 1);
        INFO("vertex " << v);
        REQUIRE(rep.zero_error);
        for (const NodeMeasure& m : rep.nodes) {
            Rational nominal(ds.rates.at(m.node));
            REQUIRE(m.achieved == nominal * Rational(63, 64));
        }
    }
}

TEST_CASE("random draws achieve every implemented vertex") {
    std::mt19937 rng(97);
    for (int case_id = 1; case_id <= 3; ++case_id) {
        for (int draw = 0; draw < 10; ++draw) {
            auto caps = testutil::random_diamond_caps_for_case(rng, case_id, 8);
            Network net = make_diamond_network(caps[0], caps[1], caps[2], caps[3]);
            for (char v : diamond_vertex_labels(case_id)) {
                DiamondStrategy ds = diamond_vertex_strategy(net, v);
                REQUIRE(ds.classification.id == case_id);
                SimTrace trace = run(net, ds.strategy, 64, 1000 + static_cast<std::uint64_t>(draw));
                MeasureReport rep = measure(trace, 1);
                INFO("case " << case_id << " vertex " << v << " caps " << caps[0] << "," << caps[1]
                             << "," << caps[2] << "," << caps[3]);
                REQUIRE(rep.zero_error);
                for (const NodeMeasure& m : rep.nodes)
                    REQUIRE(m.achieved == Rational(ds.rates.at(m.node)) * Rational(63, 64));
            }
        }
    }
}

TEST_CASE("mirrored diamonds work by relay symmetry") {
    // Same capacities as sample_diamond with the relay roles swapped.
    Network net = make_diamond_network(3, 2, 1, 4);
    DiamondStrategy ds = diamond_vertex_strategy(net, 'A');
    REQUIRE(ds.classification.mirrored);
    REQUIRE(ds.rates.at(1) == 2);
    REQUIRE(ds.rates.at(3) == 1);  // high direct link now sits at relay 3
    REQUIRE(ds.rates.at(2) == 1);
    MeasureReport rep = measure(run(net, ds.strategy, 64, 7), 1);
    REQUIRE(rep.zero_error);
    for (const NodeMeasure& m : rep.nodes)
        REQUIRE(m.achieved == Rational(ds.rates.at(m.node)) * Rational(63, 64));
}

TEST_CASE("vertex rates are feasible and sum-tight") {
    std::mt19937 rng(101);
    for (int case_id = 1; case_id <= 3; ++case_id) {
        auto caps = testutil::random_diamond_caps_for_case(rng, case_id, 8);
        Network net = make_diamond_network(caps[0], caps[1], caps[2], caps[3]);
        long long sum_bound = std::max(caps[2], caps[3]);
        for (char v : diamond_vertex_labels(case_id)) {
            DiamondStrategy ds = diamond_vertex_strategy(net, v);
            RateVector rates;
            long long total = 0;
            for (int id : net.sources()) {
                rates.push_back(Rational(ds.rates.at(id)));
                total += ds.rates.at(id);
            }
            REQUIRE(check_rates(net, rates).feasible);
            REQUIRE(total == sum_bound);  // every vertex strategy fills the direct links
        }
    }
}

TEST_CASE("non-diamond networks are rejected") {
    Network chain = parse_network("node 1\nnode 2\nnode 3 dest\nlink 1 2 2\nlink 2 3 2\n");
    REQUIRE_THROWS_AS(diamond_vertex_strategy(chain, 'A'), std::invalid_argument);

    // custom channel matrices disable the level-based strategies
    Network custom = parse_network(
        "node 1\nnode 2\nnode 3\nnode 4 dest\nlink 1 2 2\nlink 1 3 2\nlink 2 4 2\nlink 3 4 2\n"
        "matrix 1 2\n01\n10\n");
    REQUIRE_THROWS_AS(diamond_vertex_strategy(custom, 'A'), std::invalid_argument);
}

TEST_CASE("time_share validation") {
    DiamondStrategy a = diamond_vertex_strategy(sample_diamond(), 'A');
    REQUIRE_THROWS_AS(time_share({}), std::invalid_argument);
    REQUIRE_THROWS_AS(time_share({{a.strategy, Rational(1, 2)}}), std::invalid_argument);
    REQUIRE_THROWS_AS(time_share({{a.strategy, Rational(0)}, {a.strategy, Rational(1)}}),
                      std::invalid_argument);
}

TEST_CASE("segment lengths use largest remainder") {
    DiamondStrategy a = diamond_vertex_strategy(sample_diamond(), 'A');
    Schedule s = time_share({{a.strategy, Rational(1, 3)}, {a.strategy, Rational(2, 3)}});
    REQUIRE(segment_lengths(s, 3) == std::vector<int>{1, 2});
    REQUIRE(segment_lengths(s, 4) == std::vector<int>{1, 3});
    REQUIRE(segment_lengths(s, 5) == std::vector<int>{2, 3});
}

TEST_CASE("time sharing blends vertex rates") {
    Network net = sample_diamond();
    DiamondStrategy a = diamond_vertex_strategy(net, 'A');  // (2,1,1)
    DiamondStrategy d = diamond_vertex_strategy(net, 'D');  // (3,1,0)
    Schedule sched = time_share({{a.strategy, Rational(1, 2)}, {d.strategy, Rational(1, 2)}});

    SimTrace trace = run(net, sched, 64, 11);
    REQUIRE(trace.segments.size() == 2);
    REQUIRE(trace.segments[0].length == 32);
    REQUIRE(trace.segments[1].length == 32);

    MeasureReport rep = measure(trace, 1);
    REQUIRE(rep.zero_error);
    std::map<int, Rational> achieved;
    std::map<int, Rational> nominal;
    for (const NodeMeasure& m : rep.nodes) {
        achieved[m.node] = m.achieved;
        nominal[m.node] = m.nominal;
    }
    REQUIRE(nominal[1] == Rational(5, 2));
    REQUIRE(nominal[2] == Rational(1));
    REQUIRE(nominal[3] == Rational(1, 2));
    // each segment loses one pipeline slot
    REQUIRE(achieved[1] == Rational(31 * 2 + 31 * 3, 64));
    REQUIRE(achieved[2] == Rational(31 + 31, 64));
    REQUIRE(achieved[3] == Rational(31, 64));
}

TEST_CASE("single-part schedule equals the bare strategy") {
    Network net = sample_diamond();
    DiamondStrategy a = diamond_vertex_strategy(net, 'A');
    SimTrace direct = run(net, a.strategy, 32, 3);
    SimTrace scheduled = run(net, time_share({{a.strategy, Rational(1)}}), 32, 3);
    REQUIRE(direct == scheduled);
}

TEST_CASE("empty measurement window") {
    Network net = sample_diamond();
    DiamondStrategy a = diamond_vertex_strategy(net, 'A');
    SimTrace trace = run(net, a.strategy, 1, 2);
    MeasureReport rep = measure(trace, 1);
    for (const NodeMeasure& m : rep.nodes) {
        REQUIRE(m.achieved == Rational(0));
        REQUIRE(m.decoded_bits == 0);
    }
}

TEST_CASE("negative control: corrupted decoder reports errors") {
    Network net = parse_network("node 1\nnode 2 dest\nlink 1 2 2\n");
    Strategy s;
    s.encoders = {fresh_bits_encoder(1, 2, 2)};
    s.decode = [](int slot, std::span<const BitVec> dh) {
        BitVec wrong = dh[static_cast<std::size_t>(slot - 1)];
        wrong[0] ^= 1;  // deliberately flip a bit
        return std::vector<DecodeEvent>{{1, slot, wrong}};
    };
    MeasureReport rep = measure(run(net, s, 16, 21), 0);
    REQUIRE_FALSE(rep.zero_error);
    REQUIRE(rep.nodes[0].error_bits == 16);
}

TEST_CASE("report rendering") {
    Network net = sample_diamond();
    DiamondStrategy a = diamond_vertex_strategy(net, 'A');
    MeasureReport rep = measure(run(net, a.strategy, 64, 1), 1);
    std::string text = render_report(rep);
    REQUIRE(text.find("node 1 nominal=2 achieved=63/32 errors=0") != std::string::npos);
    REQUIRE(text.find("node 2 nominal=1 achieved=63/64 errors=0") != std::string::npos);
    REQUIRE(text.find("ACHIEVED") != std::string::npos);
}
