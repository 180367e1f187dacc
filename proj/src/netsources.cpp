#include "timefence/netsources.hpp"

#include <cmath>

namespace timefence::net {

TrustLevel trust_from_name(const std::string& name) {
    if (name == "trusted_local") return TrustLevel::trusted_local;
    if (name == "authenticated_remote") return TrustLevel::authenticated_remote;
    if (name == "unauthenticated_remote") return TrustLevel::unauthenticated_remote;
    throw ConfigError("unknown trust level: " + name);
}

const char* trust_name(TrustLevel t) {
    switch (t) {
        case TrustLevel::trusted_local: return "trusted_local";
        case TrustLevel::authenticated_remote: return "authenticated_remote";
        case TrustLevel::unauthenticated_remote: return "unauthenticated_remote";
    }
    return "unauthenticated_remote";
}

ServerKind kind_from_name(const std::string& name) {
    if (name == "roughtime") return ServerKind::roughtime;
    if (name == "nts") return ServerKind::nts;
    if (name == "ntp") return ServerKind::ntp;
    throw ConfigError("unknown server kind: " + name);
}

const char* kind_name(ServerKind k) {
    switch (k) {
        case ServerKind::roughtime: return "roughtime";
        case ServerKind::nts: return "nts";
        case ServerKind::ntp: return "ntp";
    }
    return "ntp";
}

const char* outcome_name(QueryOutcome o) {
    switch (o) {
        case QueryOutcome::ok: return "ok";
        case QueryOutcome::timeout: return "timeout";
        case QueryOutcome::auth_failure: return "auth_failure";
        case QueryOutcome::backoff: return "backoff";
    }
    return "timeout";
}

void ServerSpec::validate() const {
    if (id.empty()) throw ConfigError("server id must not be empty");
    if (!(base_latency > TimeOffset{}))
        throw ConfigError("server '" + id + "': base latency must be positive");
    if (jitter_sigma < TimeOffset{})
        throw ConfigError("server '" + id + "': jitter sigma must be non-negative");
    if (kind == ServerKind::roughtime && !(declared_radius > TimeOffset{}))
        throw ConfigError("server '" + id + "': roughtime radius must be positive");
    if (kind != ServerKind::roughtime && !(dispersion > TimeOffset{}))
        throw ConfigError("server '" + id + "': ntp/nts dispersion must be positive");
}

namespace {

// One-way path delay sample; clogging scales the nominal delay and its jitter.
double one_way_delay(const ServerSpec& server, const NetworkState& net, Rng& rng) {
    const double base = server.base_latency.seconds() * net.clog_factor;
    const double jitter = gauss(rng, server.jitter_sigma.seconds() * net.clog_factor);
    return std::max(1e-6, base + jitter);
}

// Timescale the server's own clock reports, as an offset from truth.
TimeOffset server_scale_offset(const ServerSpec& server, const QueryContext& ctx) {
    TimeOffset off = server.true_time_error;
    if (server.colluding) off += ctx.attacked_scale_offset;
    // A forged plain-NTP server has no key to lack: the attacker simply
    // substitutes its own timescale.
    if (server.impersonated && server.kind == ServerKind::ntp)
        off = ctx.attacked_scale_offset;
    return off;
}

std::uint64_t mix_token(std::uint64_t a, std::uint64_t b) {
    std::uint64_t x = a ^ (b * 0x9e3779b97f4a7c15ULL);
    return Rng::splitmix64(x);
}

} // namespace

RoughtimeResult query_roughtime(const ServerSpec& server, const NetworkState& net,
                                const QueryContext& ctx, Rng& rng, std::uint64_t nonce) {
    if (server.kind != ServerKind::roughtime)
        throw ConfigError("query_roughtime on a non-roughtime server");

    RoughtimeResult result;
    const double up = one_way_delay(server, net, rng);
    const double down = one_way_delay(server, net, rng);
    result.rtt = seconds(up + down);
    if (result.rtt > net.drop_threshold) {
        result.outcome = QueryOutcome::timeout;
        return result;
    }
    // Impersonator cannot produce a valid signature over the nonce.
    if (server.impersonated) {
        result.outcome = QueryOutcome::auth_failure;
        return result;
    }

    const TimePoint t_sent_truth = ctx.truth_now;
    const TimePoint generated_truth = t_sent_truth + seconds(up);
    const TimePoint received_truth = t_sent_truth + result.rtt;

    RoughtimeResponse resp;
    resp.server_id = server.id;
    // Timestamp certifies the server clock at generation; the path delay is
    // not compensated (time validation, not time transfer).
    resp.midpoint = generated_truth + server_scale_offset(server, ctx);
    resp.radius = server.declared_radius;
    resp.authenticated = true;
    resp.nonce_echo = mix_token(nonce, 0x726f756768ULL);
    resp.t_sent = t_sent_truth + ctx.client_scale_offset;
    resp.t_received = received_truth + ctx.client_scale_offset;

    result.outcome = QueryOutcome::ok;
    result.response = resp;
    return result;
}

NtsResult query_nts(const ServerSpec& server, const NetworkState& net, const QueryContext& ctx,
                    Rng& rng) {
    if (server.kind == ServerKind::roughtime)
        throw ConfigError("query_nts on a roughtime server");

    NtsResult result;
    const double up = one_way_delay(server, net, rng);
    const double down = one_way_delay(server, net, rng);
    result.rtt = seconds(up + down);
    if (result.rtt > net.drop_threshold) {
        result.outcome = QueryOutcome::timeout;
        return result;
    }
    if (server.impersonated && server.kind == ServerKind::nts) {
        result.outcome = QueryOutcome::auth_failure;
        return result;
    }

    // Four-timestamp exchange: t0/t3 on the client (GNSS) scale, t1/t2 on the
    // server scale; zero server turnaround.
    const TimeOffset srv = server_scale_offset(server, ctx);
    const TimeOffset cli = ctx.client_scale_offset;
    const double t0 = ctx.truth_now.seconds() + cli.seconds();
    const double t1 = ctx.truth_now.seconds() + up + srv.seconds();
    const double t2 = t1;
    const double t3 = ctx.truth_now.seconds() + up + down + cli.seconds();

    NtsSample sample;
    sample.server_id = server.id;
    sample.offset_theta = seconds(((t1 - t0) + (t2 - t3)) / 2.0);
    sample.round_trip_delay = seconds((t3 - t0) - (t2 - t1));
    sample.root_distance = server.dispersion + sample.round_trip_delay / 2.0;
    sample.stratum = server.stratum;
    sample.authenticated = server.kind == ServerKind::nts;
    sample.t_received = ctx.truth_now + result.rtt + cli;

    result.outcome = QueryOutcome::ok;
    result.sample = sample;
    return result;
}

bool ServerSession::due(TimePoint local_now) const {
    return !queried_ || (local_now - last_query_).seconds() >= kMinPollSeconds - 1e-12;
}

bool ServerSession::start_query(TimePoint local_now) {
    if (!due(local_now)) return false;
    queried_ = true;
    last_query_ = local_now;
    return true;
}

RoughtimeResult ServerSession::query_roughtime(const NetworkState& net, const QueryContext& ctx,
                                               Rng& rng) {
    const TimePoint local_now = ctx.truth_now + ctx.client_scale_offset;
    if (!start_query(local_now)) return {QueryOutcome::backoff, std::nullopt, {}};
    return net::query_roughtime(spec_, net, ctx, rng);
}

NtsResult ServerSession::query_nts(const NetworkState& net, const QueryContext& ctx, Rng& rng) {
    const TimePoint local_now = ctx.truth_now + ctx.client_scale_offset;
    if (!start_query(local_now)) return {QueryOutcome::backoff, std::nullopt, {}};
    return net::query_nts(spec_, net, ctx, rng);
}

ChainResult chain_roughtime(const std::vector<ServerSpec>& servers, const NetworkState& net,
                            const QueryContext& ctx, TimePoint gnss_time, Rng& rng) {
    if (servers.size() < 2)
        throw ConfigError("roughtime chaining needs >= 2 servers");

    ChainResult chain;
    std::uint64_t nonce = mix_token(static_cast<std::uint64_t>(gnss_time.epoch_nanos()),
                                    0x636861696eULL);
    for (std::size_t i = 0; i < servers.size(); ++i) {
        auto result = query_roughtime(servers[i], net, ctx, rng, nonce);
        // A tampered/unverifiable echo breaks the chain here; later servers
        // cannot be bound to the request sequence.
        const std::uint64_t expected_echo = mix_token(nonce, 0x726f756768ULL);
        const bool ok = result.outcome == QueryOutcome::ok &&
                        result.response->nonce_echo == expected_echo;
        if (!ok) {
            chain.broken_at = i;
            if (result.response) chain.links.push_back({*result.response, false});
            break;
        }
        chain.links.push_back({*result.response, true});
        nonce = mix_token(nonce ^ static_cast<std::uint64_t>(
                                      result.response->midpoint.epoch_nanos()),
                          static_cast<std::uint64_t>(gnss_time.epoch_nanos()));
    }
    return chain;
}

std::vector<ServerSpec> default_server_catalog() {
    std::vector<ServerSpec> catalog;
    const double rt_latency[] = {0.020, 0.080, 0.150};
    for (int i = 0; i < 3; ++i) {
        ServerSpec s;
        s.id = "roughtime-" + std::to_string(i);
        s.kind = ServerKind::roughtime;
        s.base_latency = seconds(rt_latency[i]);
        s.jitter_sigma = milliseconds(2.0);
        s.declared_radius = milliseconds(10.0);
        s.trust = TrustLevel::authenticated_remote;
        catalog.push_back(s);
    }
    const double nts_latency[] = {0.001, 0.005, 0.010, 0.015, 0.020};
    for (int i = 0; i < 5; ++i) {
        ServerSpec s;
        s.id = "nts-" + std::to_string(i);
        s.kind = ServerKind::nts;
        s.base_latency = seconds(nts_latency[i]);
        s.jitter_sigma = microseconds(5.0);
        s.dispersion = microseconds(10.0);
        s.stratum = 2;
        s.trust = TrustLevel::authenticated_remote;
        catalog.push_back(s);
    }
    return catalog;
}

} // namespace timefence::net
