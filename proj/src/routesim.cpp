#include "mobilab/routesim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <unordered_set>
#include <variant>

#include "mobilab/errors.hpp"

namespace mobilab {

void check_params(const SimParams& p) {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw ConfigError(what);
    };
    require(p.data_rate > 0.0, "data_rate must be positive");
    require(p.per_hop_processing > 0.0, "per_hop_processing must be positive");
    require(p.rreq_ttl_max >= 0, "rreq_ttl_max must be non-negative (0 selects node_count)");
    require(p.route_lifetime > 0.0, "route_lifetime must be positive");
    require(p.discovery_timeout > 0.0, "discovery_timeout must be positive");
    require(p.max_buffered_per_flow > 0, "max_buffered_per_flow must be positive");
    require(p.rreq_retries >= 0, "rreq_retries must be non-negative");
    require(p.broadcast_jitter_max > 0.0, "broadcast_jitter_max must be positive");
    require(p.rreq_holddown >= 0.0, "rreq_holddown must be non-negative");
    require(p.routing_radio_range > 0.0, "transmission_range_routing must be positive");
}

std::vector<Flow> build_flows(int node_count, const TrafficConfig& traffic, RandomStream& rng) {
    if (node_count < 2) throw ConfigError("at least two nodes are needed for traffic");
    if (traffic.connections < 0) throw ConfigError("max_connections must be non-negative");
    const long long pairs = static_cast<long long>(node_count) * (node_count - 1);
    if (traffic.connections > pairs)
        throw ConfigError("max_connections " + std::to_string(traffic.connections) +
                          " exceeds the " + std::to_string(pairs) + " distinct node pairs");
    if (traffic.packet_size <= 0 || traffic.rate <= 0.0)
        throw ConfigError("packet_size and sending_rate must be positive");
    if (traffic.start_spread < 0.0 || traffic.start_spread >= traffic.duration)
        throw ConfigError("flow start spread must lie in [0, routing duration)");

    std::set<std::pair<int, int>> used;
    std::vector<Flow> flows;
    while (static_cast<int>(flows.size()) < traffic.connections) {
        auto src = static_cast<int>(rng.index(static_cast<std::uint64_t>(node_count)));
        auto dst = static_cast<int>(rng.index(static_cast<std::uint64_t>(node_count)));
        if (src == dst || !used.insert({src, dst}).second) continue;
        Flow f;
        f.source = src;
        f.destination = dst;
        f.packet_size = traffic.packet_size;
        f.rate = traffic.rate;
        f.start = rng.uniform(0.0, traffic.start_spread);
        f.stop = traffic.duration;
        flows.push_back(f);
    }
    return flows;
}

PerfReport compute_perf(const PerfCounters& c) {
    PerfReport r;
    r.sent = c.sent;
    r.delivered = c.delivered;
    r.routing_packets = c.routing_packets;
    r.drops = c.drops;
    r.pdr = c.sent == 0 ? 0.0 : 100.0 * static_cast<double>(c.delivered) / static_cast<double>(c.sent);
    if (c.delivered > 0) {
        r.avg_delay = c.total_delay / static_cast<double>(c.delivered);
        r.nrl = static_cast<double>(c.routing_packets) / static_cast<double>(c.delivered);
    }
    return r;
}

namespace {

struct Packet {
    int flow = 0;
    std::uint64_t sequence = 0;
    int source = 0;
    int destination = 0;
    int size = 0;
    double created = 0.0;
    int hops = 0;
};

struct RouteEntry {
    int next_hop = -1;
    int hops = 0;
    std::uint32_t dest_seq = 0;
    bool seq_known = false;
    bool valid = false;
    double expiry = 0.0;
};

struct Rreq {
    int origin = 0;
    std::uint32_t origin_seq = 0;
    std::uint32_t id = 0;
    int destination = 0;
    std::uint32_t dest_seq = 0;
    bool dest_seq_known = false;
    int hop_count = 0;
    int ttl = 0;
};

struct Rrep {
    int origin = 0;
    int destination = 0;
    std::uint32_t dest_seq = 0;
    int hop_count = 0;
};

struct Rerr {
    int notify = 0;  // source the error travels back to
    std::vector<std::pair<int, std::uint32_t>> unreachable;
};

struct CbrSend { int flow; };
struct TxDone { int node; };
struct DataArrive { int node; Packet packet; };
struct RreqArrive { int node; int from; Rreq msg; };
struct RreqRelay { int node; Rreq msg; };
struct RrepArrive { int node; int from; Rrep msg; };
struct RerrArrive { int node; int from; Rerr msg; };
struct DiscoveryTimeout { int node; int destination; int attempt; };
struct HolddownEnd { int node; int destination; };

using Payload = std::variant<CbrSend, TxDone, DataArrive, RreqArrive, RreqRelay, RrepArrive,
                             RerrArrive, DiscoveryTimeout, HolddownEnd>;

struct Event {
    double time;
    std::uint64_t order;
    Payload payload;
};

struct Later {
    bool operator()(const Event& a, const Event& b) const {
        if (a.time != b.time) return a.time > b.time;
        return a.order > b.order;
    }
};

struct NodeState {
    std::vector<RouteEntry> routes;
    std::uint32_t seq = 0;
    std::uint32_t next_rreq_id = 0;
    std::unordered_set<std::uint64_t> seen_rreqs;
    std::map<int, std::deque<Packet>> buffers;  // per destination
    std::map<int, int> discoveries;             // destination -> current attempt
    std::map<int, double> holddown_until;       // destination -> time
    std::deque<Packet> tx_queue;
    bool busy = false;
};

class Simulation {
 public:
    Simulation(const Scenario& scenario, std::span<const Flow> flows, const SimParams& params,
               RandomStream& rng, SimLog* log)
        : scenario_(scenario), flows_(flows), params_(params), rng_(rng), log_(log),
          n_(static_cast<int>(scenario.node_count())),
          ttl_max_(params.rreq_ttl_max > 0 ? params.rreq_ttl_max : n_),
          nodes_(static_cast<std::size_t>(n_)),
          next_seq_(flows.size(), 0) {
        for (auto& node : nodes_) node.routes.resize(static_cast<std::size_t>(n_));
        if (log_ != nullptr) {
            log_->deliveries.clear();
            log_->first_route.assign(flows.size(), std::nullopt);
        }
    }

    PerfReport run() {
        for (std::size_t f = 0; f < flows_.size(); ++f)
            schedule(flows_[f].start, CbrSend{static_cast<int>(f)});
        while (!queue_.empty()) {
            if (queue_.top().time > scenario_.duration) break;
            Event ev = queue_.top();
            queue_.pop();
            now_ = ev.time;
            std::visit([this](auto& e) { handle(e); }, ev.payload);
        }
        count_unfinished();
        PerfReport report = compute_perf(counters_);
        report.routing_radio_range = params_.routing_radio_range;
        return report;
    }

 private:
    template <typename T>
    void schedule(double t, T payload) {
        queue_.push(Event{t, order_++, Payload{std::move(payload)}});
    }

    bool in_range(int a, int b) const {
        Vec2 pa = position_at(scenario_.traces[a], now_);
        Vec2 pb = position_at(scenario_.traces[b], now_);
        double r = params_.routing_radio_range;
        return squared_norm(pa - pb) <= r * r;
    }

    double hop_cost(const Packet& p) const {
        return static_cast<double>(p.size) * 8.0 / params_.data_rate + params_.per_hop_processing;
    }

    RouteEntry* valid_route(int node, int dest) {
        RouteEntry& e = nodes_[node].routes[dest];
        if (e.valid && e.expiry <= now_) e.valid = false;
        return e.valid ? &e : nullptr;
    }

    void refresh(int node, int dest) {
        if (RouteEntry* e = valid_route(node, dest))
            e->expiry = std::max(e->expiry, now_ + params_.route_lifetime);
    }

    void update_route(int node, int dest, int next_hop, int hops, std::uint32_t seq, bool seq_known) {
        if (node == dest) return;
        RouteEntry& e = nodes_[node].routes[dest];
        const bool usable = valid_route(node, dest) != nullptr;
        bool accept;
        if (seq_known && e.seq_known) {
            accept = seq > e.dest_seq || (seq == e.dest_seq && (!usable || hops < e.hops));
        } else {
            accept = !usable || hops < e.hops || seq_known;
        }
        if (!accept) return;
        e.next_hop = next_hop;
        e.hops = hops;
        if (seq_known) {
            e.dest_seq = seq;
            e.seq_known = true;
        }
        e.valid = true;
        e.expiry = std::max(usable ? e.expiry : 0.0, now_ + params_.route_lifetime);
    }

    void note_route(int node, int dest) {
        if (log_ == nullptr) return;
        for (std::size_t f = 0; f < flows_.size(); ++f)
            if (flows_[f].source == node && flows_[f].destination == dest && !log_->first_route[f])
                log_->first_route[f] = now_;
    }

    // Data plane.

    void handle(const CbrSend& ev) {
        const Flow& flow = flows_[ev.flow];
        Packet p;
        p.flow = ev.flow;
        p.sequence = next_seq_[ev.flow]++;
        p.source = flow.source;
        p.destination = flow.destination;
        p.size = flow.packet_size;
        p.created = now_;
        ++counters_.sent;
        originate(p);
        double next = flow.start + static_cast<double>(next_seq_[ev.flow]) / flow.rate;
        if (next < flow.stop) schedule(next, CbrSend{ev.flow});
    }

    void originate(const Packet& p) {
        if (valid_route(p.source, p.destination) != nullptr) {
            note_route(p.source, p.destination);
            enqueue(p.source, p);
            return;
        }
        buffer(p);
    }

    void buffer(const Packet& p) {
        NodeState& node = nodes_[p.source];
        auto& buf = node.buffers[p.destination];
        if (static_cast<int>(buf.size()) >= params_.max_buffered_per_flow) {
            ++counters_.drops.buffer_overflow;
        } else {
            buf.push_back(p);
        }
        if (!node.discoveries.contains(p.destination) && !held_down(p.source, p.destination))
            start_discovery(p.source, p.destination, 0);
    }

    bool held_down(int node, int dest) {
        auto& holds = nodes_[node].holddown_until;
        auto it = holds.find(dest);
        if (it == holds.end()) return false;
        if (it->second > now_) return true;
        holds.erase(it);
        return false;
    }

    void enqueue(int node, const Packet& p) {
        nodes_[node].tx_queue.push_back(p);
        if (!nodes_[node].busy) transmit_next(node);
    }

    void transmit_next(int node) {
        NodeState& state = nodes_[node];
        while (!state.tx_queue.empty()) {
            Packet p = state.tx_queue.front();
            state.tx_queue.pop_front();
            RouteEntry* route = valid_route(node, p.destination);
            if (route == nullptr) {
                if (node == p.source) {
                    buffer(p);
                } else {
                    ++counters_.drops.no_route;
                    send_rerr(node, p.source, {{p.destination, nodes_[node].routes[p.destination].dest_seq}});
                }
                continue;
            }
            const int next = route->next_hop;
            if (!in_range(node, next)) {
                ++counters_.drops.link_break;
                link_failure(node, next, p.source);
                continue;
            }
            refresh(node, p.destination);
            refresh(node, p.source);
            refresh(node, next);
            state.busy = true;
            const double done = now_ + hop_cost(p);
            Packet moved = p;
            ++moved.hops;
            schedule(done, DataArrive{next, moved});
            schedule(done, TxDone{node});
            return;
        }
        state.busy = false;
    }

    void handle(const TxDone& ev) {
        nodes_[ev.node].busy = false;
        transmit_next(ev.node);
    }

    void handle(const DataArrive& ev) {
        const Packet& p = ev.packet;
        if (ev.node == p.destination) {
            ++counters_.delivered;
            counters_.total_delay += now_ - p.created;
            refresh(ev.node, p.source);
            if (log_ != nullptr)
                log_->deliveries.push_back({p.flow, p.sequence, p.created, now_, p.hops});
            return;
        }
        if (p.hops >= n_) {
            ++counters_.drops.no_route;
            return;
        }
        enqueue(ev.node, p);
    }

    // Route maintenance.

    void link_failure(int node, int broken_next_hop, int notify) {
        std::vector<std::pair<int, std::uint32_t>> lost;
        for (int d = 0; d < n_; ++d) {
            RouteEntry& e = nodes_[node].routes[d];
            if (e.valid && e.next_hop == broken_next_hop) {
                e.valid = false;
                if (e.seq_known) ++e.dest_seq;
                lost.emplace_back(d, e.dest_seq);
            }
        }
        if (node != notify && !lost.empty()) send_rerr(node, notify, std::move(lost));
    }

    void send_rerr(int node, int notify, std::vector<std::pair<int, std::uint32_t>> lost) {
        if (node == notify) return;
        RouteEntry* back = valid_route(node, notify);
        if (back == nullptr) return;
        unicast(node, back->next_hop, RerrArrive{back->next_hop, node, Rerr{notify, std::move(lost)}});
    }

    void handle(const RerrArrive& ev) {
        std::vector<std::pair<int, std::uint32_t>> lost;
        for (auto [d, seq] : ev.msg.unreachable) {
            RouteEntry& e = nodes_[ev.node].routes[d];
            if (e.valid && e.next_hop == ev.from) {
                e.valid = false;
                e.dest_seq = std::max(e.dest_seq, seq);
                e.seq_known = true;
                lost.emplace_back(d, e.dest_seq);
            }
        }
        if (ev.node != ev.msg.notify && !lost.empty()) send_rerr(ev.node, ev.msg.notify, std::move(lost));
    }

    // Route discovery.

    int ttl_for(int attempt) const {
        if (attempt >= params_.rreq_retries) return ttl_max_;
        return std::min(ttl_max_, 2 << attempt);
    }

    static std::uint64_t rreq_key(int origin, std::uint32_t id) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(origin)) << 32) | id;
    }

    void start_discovery(int node, int dest, int attempt) {
        NodeState& state = nodes_[node];

        state.discoveries[dest] = attempt;
        ++state.seq;
        Rreq msg;
        msg.origin = node;
        msg.origin_seq = state.seq;
        msg.id = state.next_rreq_id++;
        msg.destination = dest;
        const RouteEntry& known = state.routes[dest];
        msg.dest_seq = known.dest_seq;
        msg.dest_seq_known = known.seq_known;
        msg.hop_count = 0;
        msg.ttl = ttl_for(attempt);
        state.seen_rreqs.insert(rreq_key(node, msg.id));
        broadcast(node, msg);
        schedule(now_ + params_.discovery_timeout, DiscoveryTimeout{node, dest, attempt});
    }

    void broadcast(int node, const Rreq& msg) {
        ++counters_.routing_packets;

        const Vec2 here = position_at(scenario_.traces[node], now_);
        const double r2 = params_.routing_radio_range * params_.routing_radio_range;
        for (int k = 0; k < n_; ++k) {
            if (k == node) continue;
            if (squared_norm(position_at(scenario_.traces[k], now_) - here) <= r2)
                schedule(now_, RreqArrive{k, node, msg});
        }
    }

    template <typename Arrival>
    void unicast(int from, int to, Arrival arrival) {
        ++counters_.routing_packets;
        if (in_range(from, to)) schedule(now_, std::move(arrival));
    }

    void handle(const RreqArrive& ev) {
        const int x = ev.node;
        const Rreq& m = ev.msg;
        NodeState& state = nodes_[x];
        update_route(x, ev.from, ev.from, 1, 0, false);
        if (m.origin == x) return;
        if (!state.seen_rreqs.insert(rreq_key(m.origin, m.id)).second) return;
        update_route(x, m.origin, ev.from, m.hop_count + 1, m.origin_seq, true);

        if (x == m.destination) {
            if (m.dest_seq_known && m.dest_seq > state.seq) state.seq = m.dest_seq;
            unicast(x, ev.from, RrepArrive{ev.from, x, Rrep{m.origin, x, state.seq, 0}});
            return;
        }
        RouteEntry* known = valid_route(x, m.destination);
        if (known != nullptr && known->seq_known &&
            (!m.dest_seq_known || known->dest_seq >= m.dest_seq)) {
            unicast(x, ev.from,
                    RrepArrive{ev.from, x, Rrep{m.origin, m.destination, known->dest_seq, known->hops}});
            return;
        }
        if (m.ttl > 1) {
            Rreq relay = m;
            --relay.ttl;
            ++relay.hop_count;
            const RouteEntry& stale = state.routes[m.destination];
            if (stale.seq_known && (!relay.dest_seq_known || stale.dest_seq > relay.dest_seq)) {
                relay.dest_seq = stale.dest_seq;
                relay.dest_seq_known = true;
            }
            schedule(now_ + rng_.uniform(0.0, params_.broadcast_jitter_max), RreqRelay{x, relay});
        }
    }

    void handle(const RreqRelay& ev) { broadcast(ev.node, ev.msg); }

    void handle(const RrepArrive& ev) {
        const int x = ev.node;
        const Rrep& m = ev.msg;
        update_route(x, ev.from, ev.from, 1, 0, false);
        update_route(x, m.destination, ev.from, m.hop_count + 1, m.dest_seq, true);
        if (x == m.origin) {
            if (valid_route(x, m.destination) != nullptr) complete_discovery(x, m.destination);
            return;
        }
        RouteEntry* back = valid_route(x, m.origin);
        if (back == nullptr) return;
        Rrep fwd = m;
        ++fwd.hop_count;
        unicast(x, back->next_hop, RrepArrive{back->next_hop, x, fwd});
    }

    void complete_discovery(int node, int dest) {
        NodeState& state = nodes_[node];
        state.discoveries.erase(dest);
        note_route(node, dest);
        auto it = state.buffers.find(dest);
        if (it == state.buffers.end()) return;
        std::deque<Packet> pending = std::move(it->second);
        state.buffers.erase(it);
        for (const Packet& p : pending) enqueue(node, p);
    }

    void handle(const DiscoveryTimeout& ev) {
        NodeState& state = nodes_[ev.node];
        auto it = state.discoveries.find(ev.destination);
        if (it == state.discoveries.end() || it->second != ev.attempt) return;
        if (ev.attempt < params_.rreq_retries) {
            start_discovery(ev.node, ev.destination, ev.attempt + 1);
            return;
        }
        state.discoveries.erase(it);

        auto buf = state.buffers.find(ev.destination);
        if (buf != state.buffers.end()) {
            counters_.drops.discovery_failed += buf->second.size();
            state.buffers.erase(buf);
        }
        if (params_.rreq_holddown > 0.0) {
            state.holddown_until[ev.destination] = now_ + params_.rreq_holddown;
            schedule(now_ + params_.rreq_holddown, HolddownEnd{ev.node, ev.destination});
        }
    }

    void handle(const HolddownEnd& ev) {
        if (held_down(ev.node, ev.destination)) return;
        NodeState& state = nodes_[ev.node];
        auto buf = state.buffers.find(ev.destination);
        if (buf == state.buffers.end() || buf->second.empty()) return;
        if (valid_route(ev.node, ev.destination) != nullptr) {
            complete_discovery(ev.node, ev.destination);
        } else if (!state.discoveries.contains(ev.destination)) {
            start_discovery(ev.node, ev.destination, 0);
        }
    }

    void count_unfinished() {
        std::size_t left = 0;
        for (const NodeState& node : nodes_) {
            left += node.tx_queue.size();
            for (const auto& [dest, buf] : node.buffers) left += buf.size();
        }
        while (!queue_.empty()) {
            if (std::holds_alternative<DataArrive>(queue_.top().payload)) ++left;
            queue_.pop();
        }
        counters_.drops.unfinished = left;
    }

    const Scenario& scenario_;
    std::span<const Flow> flows_;
    const SimParams& params_;
    RandomStream& rng_;
    SimLog* log_;
    const int n_;
    const int ttl_max_;
    std::vector<NodeState> nodes_;
    std::vector<std::uint64_t> next_seq_;
    std::priority_queue<Event, std::vector<Event>, Later> queue_;
    std::uint64_t order_ = 0;
    double now_ = 0.0;
    PerfCounters counters_;
};

}  // namespace

PerfReport run_simulation(const Scenario& scenario, std::span<const Flow> flows,
                          const SimParams& params, RandomStream& rng, SimLog* log) {
    check_params(params);
    if (!validate(scenario).ok()) throw UsageError("scenario failed validation");
    const int n = static_cast<int>(scenario.node_count());
    for (std::size_t f = 0; f < flows.size(); ++f) {
        const Flow& flow = flows[f];
        bool ok = flow.source >= 0 && flow.source < n && flow.destination >= 0 &&
                  flow.destination < n && flow.source != flow.destination && flow.rate > 0.0 &&
                  flow.start < flow.stop && flow.packet_size > 0;
        if (!ok) throw UsageError("flow " + std::to_string(f) + " is malformed");
    }
    Simulation sim(scenario, flows, params, rng, log);
    return sim.run();
}

}  // namespace mobilab
