#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "lfdn/network.hpp"
#include "lfdn/rational.hpp"

namespace lfdn {

/// Per-node encoder. Strict causality is structural: at slot t the engine
/// passes the received history y[1..t-1] only, so an encoder cannot read the
/// current slot's reception.
struct EncoderSpec {
    int node = 0;
    int rate = 0;  // fresh message bits consumed per slot
    std::function<BitVec(int slot, const BitVec& message, std::span<const BitVec> history)> encode;
};

/// A decoding claim: "node's fresh bits of slot msg_slot were `bits`".
struct DecodeEvent {
    int node = 0;
    int msg_slot = 0;
    BitVec bits;

    friend bool operator==(const DecodeEvent&, const DecodeEvent&) = default;
};

/// Destination decoder, invoked once per slot with y_d[1..t].
using DecodeFn = std::function<std::vector<DecodeEvent>(int slot, std::span<const BitVec> dest_history)>;

struct Strategy {
    std::vector<EncoderSpec> encoders;
    DecodeFn decode;

    std::map<int, int> rates() const {
        std::map<int, int> out;
        for (const EncoderSpec& e : encoders) out[e.node] = e.rate;
        return out;
    }
};

/// One time-sharing component: a strategy and its slot fraction.
struct SharePart {
    Strategy strategy;
    Rational fraction;
};

struct Schedule {
    std::vector<SharePart> parts;
};

/// Validates a time-sharing schedule: fractions positive and summing to one.
inline Schedule time_share(std::vector<SharePart> parts) {
    if (parts.empty()) throw std::invalid_argument("time_share: empty strategy list");
    Rational sum(0);
    for (const SharePart& p : parts) {
        if (!(p.fraction > Rational(0))) throw std::invalid_argument("time_share: fractions must be positive");
        sum += p.fraction;
    }
    if (sum != Rational(1)) throw std::invalid_argument("time_share: fractions must sum to 1");
    return Schedule{std::move(parts)};
}

/// Splits T slots across the schedule by largest remainder; ties go to the
/// earlier part, so the split is deterministic.
inline std::vector<int> segment_lengths(const Schedule& sched, int slots) {
    std::vector<int> len(sched.parts.size());
    std::vector<Rational> rem(sched.parts.size());
    int assigned = 0;
    for (std::size_t k = 0; k < sched.parts.size(); ++k) {
        Rational exact = sched.parts[k].fraction * Rational(slots);
        long long fl = exact.num() / exact.den();
        len[k] = static_cast<int>(fl);
        rem[k] = exact - Rational(fl);
        assigned += len[k];
    }
    int leftover = slots - assigned;
    std::vector<std::size_t> order(sched.parts.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return rem[b] < rem[a]; });
    for (int i = 0; i < leftover; ++i) ++len[order[static_cast<std::size_t>(i)]];
    return len;
}

struct SlotRecord {
    std::map<int, BitVec> sent;      // encoder nodes only; silent nodes transmit zero
    std::map<int, BitVec> received;  // every node
    std::vector<DecodeEvent> decoded;

    friend bool operator==(const SlotRecord&, const SlotRecord&) = default;
};

struct TraceSegment {
    int start_slot = 1;
    int length = 0;
    std::map<int, int> rates;                 // node -> fresh bits per slot
    std::map<int, std::size_t> msg_offset;    // node -> offset into SimTrace::messages

    friend bool operator==(const TraceSegment&, const TraceSegment&) = default;
};

/// Full record of a simulation: all transmissions, receptions, decode events
/// and the drawn message bits, segmented when a schedule was run.
struct SimTrace {
    int slots = 0;
    int level = 0;
    std::vector<SlotRecord> records;      // index t-1 = slot t
    std::map<int, BitVec> messages;       // per node, all fresh bits in draw order
    std::vector<TraceSegment> segments;

    const TraceSegment& segment_of(int slot) const {
        for (const TraceSegment& s : segments)
            if (slot >= s.start_slot && slot < s.start_slot + s.length) return s;
        throw std::out_of_range("trace: slot outside every segment");
    }

    /// The true fresh bits node consumed at a global slot.
    BitVec fresh_bits(int node, int slot) const {
        const TraceSegment& seg = segment_of(slot);
        auto rit = seg.rates.find(node);
        if (rit == seg.rates.end() || rit->second == 0) return {};
        const std::size_t rate = static_cast<std::size_t>(rit->second);
        const std::size_t off =
            seg.msg_offset.at(node) + static_cast<std::size_t>(slot - seg.start_slot) * rate;
        const BitVec& msg = messages.at(node);
        return BitVec(msg.begin() + static_cast<std::ptrdiff_t>(off),
                      msg.begin() + static_cast<std::ptrdiff_t>(off + rate));
    }

    friend bool operator==(const SimTrace&, const SimTrace&) = default;
};

namespace detail {

inline void run_segment(const Network& net, const Strategy& strat, int start_slot, int length,
                        SimTrace& trace, std::mt19937_64& rng) {
    const std::size_t q = static_cast<std::size_t>(net.level());

    std::vector<const EncoderSpec*> encs;
    for (const EncoderSpec& e : strat.encoders) encs.push_back(&e);
    std::sort(encs.begin(), encs.end(),
              [](const EncoderSpec* a, const EncoderSpec* b) { return a->node < b->node; });
    for (std::size_t i = 0; i < encs.size(); ++i) {
        net.require_node(encs[i]->node);
        if (encs[i]->node == net.dest())
            throw std::invalid_argument("run: the destination cannot carry an encoder");
        if (encs[i]->rate < 0) throw std::invalid_argument("run: negative encoder rate");
        if (!encs[i]->encode) throw std::invalid_argument("run: encoder without encode function");
        if (i > 0 && encs[i - 1]->node == encs[i]->node)
            throw std::invalid_argument("run: duplicate encoder for node");
    }

    TraceSegment seg;
    seg.start_slot = start_slot;
    seg.length = length;

    // Draw each node's fresh bits for the whole segment, ascending node order.
    std::map<int, BitVec> seg_msgs;
    for (const EncoderSpec* e : encs) {
        seg.rates[e->node] = e->rate;
        seg.msg_offset[e->node] = trace.messages[e->node].size();
        BitVec bits(static_cast<std::size_t>(length) * static_cast<std::size_t>(e->rate));
        for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1u);
        trace.messages[e->node].insert(trace.messages[e->node].end(), bits.begin(), bits.end());
        seg_msgs[e->node] = std::move(bits);
    }

    std::map<int, std::vector<BitVec>> history;
    for (int id : net.nodes()) history[id] = {};

    for (int t = 1; t <= length; ++t) {
        SlotRecord rec;
        for (const EncoderSpec* e : encs) {
            const std::vector<BitVec>& h = history[e->node];
            BitVec x = e->encode(t, seg_msgs[e->node], std::span<const BitVec>(h.data(), h.size()));
            if (x.size() != q) throw std::runtime_error("run: encoder output has wrong length");
            rec.sent[e->node] = std::move(x);
        }
        rec.received = receive(net, rec.sent);
        for (int id : net.nodes()) history[id].push_back(rec.received[id]);

        if (strat.decode) {
            const std::vector<BitVec>& dh = history[net.dest()];
            for (DecodeEvent ev : strat.decode(t, std::span<const BitVec>(dh.data(), dh.size()))) {
                if (ev.msg_slot < 1 || ev.msg_slot > length)
                    throw std::runtime_error("run: decode event references a slot outside the segment");
                auto rit = seg.rates.find(ev.node);
                const int rate = rit == seg.rates.end() ? 0 : rit->second;
                if (ev.bits.size() != static_cast<std::size_t>(rate))
                    throw std::runtime_error("run: decode event size does not match the node rate");
                ev.msg_slot += start_slot - 1;
                rec.decoded.push_back(std::move(ev));
            }
        }
        trace.records[static_cast<std::size_t>(start_slot - 1 + t - 1)] = std::move(rec);
    }
    trace.segments.push_back(std::move(seg));
}

}  // namespace detail

/// Runs a schedule for the given number of slots. Message bits are drawn from
/// a seeded generator, so identical inputs give an identical trace. Segments
/// are independent runs of their strategy: relay pipelines restart at each
/// segment boundary.
inline SimTrace run(const Network& net, const Schedule& sched, int slots, std::uint64_t seed) {
    if (slots < 1) throw std::invalid_argument("run: need at least one slot");
    if (sched.parts.empty()) throw std::invalid_argument("run: empty schedule");

    SimTrace trace;
    trace.slots = slots;
    trace.level = net.level();
    trace.records.resize(static_cast<std::size_t>(slots));

    std::mt19937_64 rng(seed);
    const std::vector<int> lengths = segment_lengths(sched, slots);
    int start = 1;
    for (std::size_t k = 0; k < sched.parts.size(); ++k) {
        detail::run_segment(net, sched.parts[k].strategy, start, lengths[k], trace, rng);
        start += lengths[k];
    }
    return trace;
}

inline SimTrace run(const Network& net, const Strategy& strat, int slots, std::uint64_t seed) {
    return run(net, Schedule{{SharePart{strat, Rational(1)}}}, slots, seed);
}

struct NodeMeasure {
    int node = 0;
    Rational nominal;      // slot-weighted fresh bits per slot
    Rational achieved;     // correctly decoded bits in the window, per slot
    long long sent_bits = 0;
    long long decoded_bits = 0;
    long long error_bits = 0;
};

struct MeasureReport {
    std::vector<NodeMeasure> nodes;
    bool zero_error = true;
};

/// Steady-state measurement: within each segment the first `pipeline_delay`
/// slots are excluded, then every decode event is compared against the drawn
/// message bits.
inline MeasureReport measure(const SimTrace& trace, int pipeline_delay) {
    if (pipeline_delay < 0) throw std::invalid_argument("measure: negative delay");

    std::map<int, NodeMeasure> stats;
    for (const TraceSegment& seg : trace.segments)
        for (const auto& [node, rate] : seg.rates) {
            stats[node].node = node;
            stats[node].sent_bits += static_cast<long long>(rate) * seg.length;
        }

    for (const TraceSegment& seg : trace.segments) {
        for (int t = pipeline_delay + 1; t <= seg.length; ++t) {
            const SlotRecord& rec = trace.records[static_cast<std::size_t>(seg.start_slot - 1 + t - 1)];
            for (const DecodeEvent& ev : rec.decoded) {
                BitVec truth = trace.fresh_bits(ev.node, ev.msg_slot);
                NodeMeasure& m = stats[ev.node];
                m.node = ev.node;
                m.decoded_bits += static_cast<long long>(ev.bits.size());
                for (std::size_t i = 0; i < ev.bits.size(); ++i)
                    if (i >= truth.size() || ev.bits[i] != truth[i]) ++m.error_bits;
            }
        }
    }

    MeasureReport report;
    for (auto& [node, m] : stats) {
        m.nominal = Rational(m.sent_bits, trace.slots);
        m.achieved = Rational(m.decoded_bits - m.error_bits, trace.slots);
        if (m.error_bits > 0) report.zero_error = false;
        report.nodes.push_back(m);
    }
    return report;
}

/// Plain-text simulation report: one line per node, then the verdict.
inline std::string render_report(const MeasureReport& report) {
    std::string out;
    for (const NodeMeasure& m : report.nodes) {
        out += "node " + std::to_string(m.node) + " nominal=" + m.nominal.str() +
               " achieved=" + m.achieved.str() + " errors=" + std::to_string(m.error_bits) + "\n";
    }
    out += report.zero_error ? "ACHIEVED\n" : "FAILED\n";
    return out;
}

// ---------------------------------------------------------------------------
// Diamond network strategies
// ---------------------------------------------------------------------------

/// The four-node diamond: one source node feeding two relays that both feed
/// the destination. relay2/relay3 follow ascending node id.
struct Diamond {
    int src = 0, relay2 = 0, relay3 = 0, dest = 0;
    int n12 = 0, n13 = 0, n2d = 0, n3d = 0;
};

inline Network make_diamond_network(int n12, int n13, int n2d, int n3d) {
    return Network({1, 2, 3, 4}, 4,
                   {Link{1, 2, n12, {}}, Link{1, 3, n13, {}}, Link{2, 4, n2d, {}}, Link{3, 4, n3d, {}}});
}

/// Recognizes a diamond with default shift channels; nullopt otherwise.
inline std::optional<Diamond> diamond_of(const Network& net) {
    if (net.nodes().size() != 4 || net.links().size() != 4) return std::nullopt;
    for (const Link& l : net.links())
        if (l.channel) return std::nullopt;

    Diamond d;
    d.dest = net.dest();
    std::vector<int> relays = net.fan_in(d.dest);
    if (relays.size() != 2) return std::nullopt;
    d.relay2 = relays[0];
    d.relay3 = relays[1];
    for (int id : net.nodes())
        if (id != d.dest && id != d.relay2 && id != d.relay3) d.src = id;
    if (d.src == 0) return std::nullopt;

    const Link* l12 = net.find_link(d.src, d.relay2);
    const Link* l13 = net.find_link(d.src, d.relay3);
    const Link* l2d = net.find_link(d.relay2, d.dest);
    const Link* l3d = net.find_link(d.relay3, d.dest);
    if (!l12 || !l13 || !l2d || !l3d) return std::nullopt;
    d.n12 = l12->capacity;
    d.n13 = l13->capacity;
    d.n2d = l2d->capacity;
    d.n3d = l3d->capacity;
    return d;
}

struct DiamondCase {
    int id = 0;          // 1, 2 or 3
    bool mirrored = false;  // true when the relays' roles are swapped
};

/// Classifies the capacity ordering. The implemented orderings are
/// n3d <= n12 <= n13 <= n2d and its relay-swapped mirror; on a boundary tie
/// the higher-numbered case applies.
inline DiamondCase diamond_case(int n12, int n13, int n2d, int n3d) {
    bool canonical = n3d <= n12 && n12 <= n13 && n13 <= n2d;
    bool mirrored = n2d <= n13 && n13 <= n12 && n12 <= n3d;
    if (!canonical && !mirrored)
        throw std::invalid_argument("diamond_case: capacity ordering without an implemented strategy");
    DiamondCase dc;
    dc.mirrored = !canonical;
    const int a12 = dc.mirrored ? n13 : n12;
    const int a13 = dc.mirrored ? n12 : n13;
    const int a2d = dc.mirrored ? n3d : n2d;
    const int a3d = dc.mirrored ? n2d : n3d;
    if (a12 + a3d >= a2d)
        dc.id = 3;
    else if (a12 + a3d >= a13)
        dc.id = 2;
    else
        dc.id = 1;
    return dc;
}

/// Vertex labels available for a case: E exists only in cases 2 and 3.
inline std::vector<char> diamond_vertex_labels(int case_id) {
    if (case_id == 1) return {'A', 'B', 'C', 'D'};
    return {'A', 'B', 'C', 'D', 'E'};
}

namespace detail {

/// Relay behaviour at a diamond vertex: own fresh bits on the top transmit
/// levels, then the source's slot t-1 bits fwd_lo..fwd_hi directly below.
struct RelayPlan {
    int own = 0;
    int fwd_lo = 1, fwd_hi = 0;  // empty when fwd_hi < fwd_lo
    int fwd_len() const { return fwd_hi >= fwd_lo ? fwd_hi - fwd_lo + 1 : 0; }
};

struct VertexPlan {
    int r1 = 0;
    RelayPlan p2, p3;
};

/// Vertex prescriptions in canonical capacity space a3d <= a12 <= a13 <= a2d.
inline VertexPlan make_vertex_plan(int a12, int a13, int a2d, int a3d, int case_id, char vertex) {
    VertexPlan p;
    switch (vertex) {
        case 'B':
            p.p2.own = a2d;
            break;
        case 'C':
            p.p2.own = a2d - a3d;
            p.p3.own = a3d;
            break;
        case 'A':
            if (case_id == 3) {
                p.r1 = a2d - a3d;
                p.p2 = {0, 1, a2d - a3d};
                p.p3.own = a3d;
            } else {
                p.r1 = a12;
                p.p2 = {a2d - a12 - a3d, 1, a12};
                p.p3.own = a3d;
            }
            break;
        case 'D':
            if (case_id == 1) {
                p.r1 = a12 + a3d;
                p.p2 = {a2d - a12 - a3d, 1, a12};
                p.p3 = {0, a12 + 1, a12 + a3d};
            } else {
                p.r1 = a13;
                p.p2 = {a2d - a13, 1, a13 - a3d};
                p.p3 = {0, a13 - a3d + 1, a13};
            }
            break;
        case 'E':
            if (case_id == 2) {
                p.r1 = a13;
                p.p2 = {a2d - a12 - a3d, 1, a12};
                p.p3 = {a3d + a12 - a13, a12 + 1, a13};
            } else if (case_id == 3) {
                p.r1 = a13;
                p.p2 = {0, 1, a2d - a3d};
                p.p3 = {a2d - a13, a2d - a3d + 1, a13};
            } else {
                throw std::invalid_argument("diamond_vertex_strategy: vertex E does not exist in this configuration");
            }
            break;
        default:
            throw std::invalid_argument("diamond_vertex_strategy: unknown vertex label");
    }

    // The case guards make every component non-negative and collision-free;
    // verify rather than trust the algebra.
    auto fail = [](const char* what) { throw std::logic_error(std::string("vertex plan invalid: ") + what); };
    if (p.r1 < 0 || p.p2.own < 0 || p.p3.own < 0) fail("negative rate");
    if (p.r1 > a13) fail("source rate exceeds broadcast reach");
    if (p.p2.fwd_len() > 0 && p.p2.fwd_hi > a12) fail("relay 2 cannot see all forwarded bits");
    if (p.p3.fwd_len() > 0 && p.p3.fwd_hi > a13) fail("relay 3 cannot see all forwarded bits");
    if (p.p2.own + p.p2.fwd_len() > a2d) fail("relay 2 transmit levels exceed its link");
    if (p.p3.own + p.p3.fwd_len() > a3d) fail("relay 3 transmit levels exceed its link");
    // Arrival windows at the destination must not overlap (q = a2d).
    const int end2 = p.p2.own + p.p2.fwd_len();              // arrivals [0, end2)
    const int start3 = a2d - a3d;                            // arrivals [start3, ...)
    if (p.p3.own + p.p3.fwd_len() > 0 && end2 > start3) fail("arrival windows overlap");
    // Forwarded ranges must reassemble the source stream exactly.
    if (p.r1 > 0) {
        const bool covers = (p.p2.fwd_len() + p.p3.fwd_len() == p.r1) && p.p2.fwd_lo == 1 &&
                            (p.p2.fwd_len() == 0 || p.p3.fwd_len() == 0 ||
                             p.p3.fwd_lo == p.p2.fwd_hi + 1) &&
                            (p.p3.fwd_len() > 0 ? p.p3.fwd_hi == p.r1 : p.p2.fwd_hi == p.r1);
        if (!covers) fail("forwarded ranges do not cover the source stream");
    }
    return p;
}

}  // namespace detail

struct DiamondStrategy {
    Strategy strategy;
    std::map<int, int> rates;  // nominal fresh bits per slot, by actual node id
    DiamondCase classification;
    char vertex = '?';
};

/// Builds the decode-and-forward strategy achieving one region vertex of a
/// diamond network. The source sends fresh bits on its top levels every slot;
/// each relay decodes its prescribed slice of the source's previous slot and
/// forwards it below its own fresh bits; the destination demultiplexes by bit
/// level and reassembles the source stream with a one-slot pipeline delay.
inline DiamondStrategy diamond_vertex_strategy(const Network& net, char vertex) {
    std::optional<Diamond> dia = diamond_of(net);
    if (!dia) throw std::invalid_argument("diamond_vertex_strategy: network is not a shift-channel diamond");

    const DiamondCase dc = diamond_case(dia->n12, dia->n13, dia->n2d, dia->n3d);
    const int a12 = dc.mirrored ? dia->n13 : dia->n12;
    const int a13 = dc.mirrored ? dia->n12 : dia->n13;
    const int a2d = dc.mirrored ? dia->n3d : dia->n2d;
    const int a3d = dc.mirrored ? dia->n2d : dia->n3d;
    const detail::VertexPlan plan = detail::make_vertex_plan(a12, a13, a2d, a3d, dc.id, vertex);

    const int src = dia->src;
    const int c2 = dc.mirrored ? dia->relay3 : dia->relay2;  // high direct link
    const int c3 = dc.mirrored ? dia->relay2 : dia->relay3;
    const int q = net.level();  // equals a2d

    auto source_encoder = [r1 = plan.r1, q](int slot, const BitVec& msg, std::span<const BitVec>) {
        BitVec x(static_cast<std::size_t>(q), 0);
        for (int k = 0; k < r1; ++k)
            x[static_cast<std::size_t>(k)] = msg[static_cast<std::size_t>((slot - 1) * r1 + k)];
        return x;
    };

    auto relay_encoder = [q](detail::RelayPlan rp, int in_cap) {
        return [rp, in_cap, q](int slot, const BitVec& msg, std::span<const BitVec> history) {
            BitVec x(static_cast<std::size_t>(q), 0);
            for (int k = 0; k < rp.own; ++k)
                x[static_cast<std::size_t>(k)] = msg[static_cast<std::size_t>((slot - 1) * rp.own + k)];
            if (rp.fwd_len() > 0 && slot >= 2) {
                const BitVec& y = history[static_cast<std::size_t>(slot - 2)];
                for (int k = 0; k < rp.fwd_len(); ++k)
                    x[static_cast<std::size_t>(rp.own + k)] =
                        y[static_cast<std::size_t>(q - in_cap + rp.fwd_lo - 1 + k)];
            }
            return x;
        };
    };

    auto decoder = [plan, src, c2, c3, a2d, a3d, q](int slot, std::span<const BitVec> dh) {
        std::vector<DecodeEvent> events;
        const BitVec& y = dh[static_cast<std::size_t>(slot - 1)];
        if (plan.p2.own > 0) {
            BitVec bits(static_cast<std::size_t>(plan.p2.own));
            for (int k = 0; k < plan.p2.own; ++k)
                bits[static_cast<std::size_t>(k)] = y[static_cast<std::size_t>(q - a2d + k)];
            events.push_back({c2, slot, std::move(bits)});
        }
        if (plan.p3.own > 0) {
            BitVec bits(static_cast<std::size_t>(plan.p3.own));
            for (int k = 0; k < plan.p3.own; ++k)
                bits[static_cast<std::size_t>(k)] = y[static_cast<std::size_t>(q - a3d + k)];
            events.push_back({c3, slot, std::move(bits)});
        }
        if (plan.r1 > 0 && slot >= 2) {
            BitVec bits(static_cast<std::size_t>(plan.r1));
            for (int k = 0; k < plan.p2.fwd_len(); ++k)
                bits[static_cast<std::size_t>(plan.p2.fwd_lo - 1 + k)] =
                    y[static_cast<std::size_t>(q - a2d + plan.p2.own + k)];
            for (int k = 0; k < plan.p3.fwd_len(); ++k)
                bits[static_cast<std::size_t>(plan.p3.fwd_lo - 1 + k)] =
                    y[static_cast<std::size_t>(q - a3d + plan.p3.own + k)];
            events.push_back({src, slot - 1, std::move(bits)});
        }
        return events;
    };

    DiamondStrategy out;
    out.classification = dc;
    out.vertex = vertex;
    out.rates = {{src, plan.r1}, {c2, plan.p2.own}, {c3, plan.p3.own}};
    out.strategy.encoders = {
        EncoderSpec{src, plan.r1, source_encoder},
        EncoderSpec{c2, plan.p2.own, relay_encoder(plan.p2, a12)},
        EncoderSpec{c3, plan.p3.own, relay_encoder(plan.p3, a13)},
    };
    out.strategy.decode = decoder;
    return out;
}

inline DiamondStrategy diamond_vertex_strategy(int n12, int n13, int n2d, int n3d, char vertex) {
    return diamond_vertex_strategy(make_diamond_network(n12, n13, n2d, n3d), vertex);
}

}  // namespace lfdn
