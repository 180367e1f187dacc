#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "timefence/timebase.hpp"

namespace timefence::net {

enum class TrustLevel { unauthenticated_remote = 0, authenticated_remote = 1, trusted_local = 2 };

TrustLevel trust_from_name(const std::string& name);
const char* trust_name(TrustLevel t);

enum class ServerKind { roughtime, nts, ntp };

ServerKind kind_from_name(const std::string& name);
const char* kind_name(ServerKind k);

struct ServerSpec {
    std::string id;
    ServerKind kind = ServerKind::nts;
    TimeOffset true_time_error;  // server misalignment from true time
    TimeOffset base_latency;     // nominal one-way delay
    TimeOffset jitter_sigma;     // per-direction delay jitter std
    TimeOffset declared_radius;  // roughtime confidence radius
    TimeOffset dispersion;       // ntp/nts server dispersion
    int stratum = 2;
    TrustLevel trust = TrustLevel::unauthenticated_remote;
    bool colluding = false;      // reports time tracking the attack trajectory
    bool impersonated = false;   // an attacker answers in place of the real server

    void validate() const;
};

struct NetworkState {
    double clog_factor = 1.0;            // >= 1, multiplies latency and jitter
    TimeOffset drop_threshold = seconds(2.0); // client timeout on round trip
};

// Truth-side view a query needs: true time now, plus the offsets of the client
// timescale (GNSS-provided) and of the attacked timescale colluding servers
// mirror. Offsets are (scale - truth).
struct QueryContext {
    TimePoint truth_now;
    TimeOffset client_scale_offset;   // GNSS timescale minus truth
    TimeOffset attacked_scale_offset; // timescale colluding/forging servers report
};

enum class QueryOutcome { ok, timeout, auth_failure, backoff };

const char* outcome_name(QueryOutcome o);

struct RoughtimeResponse {
    TimePoint midpoint;       // server timestamp; one-way delay left uncompensated
    TimeOffset radius;        // declared confidence radius, latency-invariant
    bool authenticated = false;
    std::uint64_t nonce_echo = 0;
    TimePoint t_sent;         // client-scale send/receive instants
    TimePoint t_received;
    std::string server_id;
};

struct NtsSample {
    TimeOffset offset_theta;     // remote minus local from the four-timestamp exchange
    TimeOffset root_distance;    // dispersion + RTT/2
    TimeOffset round_trip_delay;
    int stratum = 0;
    bool authenticated = false;
    TimePoint t_received;        // client scale
    std::string server_id;
};

struct RoughtimeResult {
    QueryOutcome outcome = QueryOutcome::timeout;
    std::optional<RoughtimeResponse> response;
    TimeOffset rtt;
};

struct NtsResult {
    QueryOutcome outcome = QueryOutcome::timeout;
    std::optional<NtsSample> sample;
    TimeOffset rtt;
};

RoughtimeResult query_roughtime(const ServerSpec& server, const NetworkState& net,
                                const QueryContext& ctx, Rng& rng,
                                std::uint64_t nonce = 0);

NtsResult query_nts(const ServerSpec& server, const NetworkState& net, const QueryContext& ctx,
                    Rng& rng);

// Per-server client session: owns the 1 s poll floor. Queries issued sooner
// than min_poll after the previous one come back as `backoff`.
class ServerSession {
public:
    explicit ServerSession(ServerSpec spec) : spec_(std::move(spec)) {}

    const ServerSpec& spec() const { return spec_; }

    bool due(TimePoint local_now) const;
    RoughtimeResult query_roughtime(const NetworkState& net, const QueryContext& ctx, Rng& rng);
    NtsResult query_nts(const NetworkState& net, const QueryContext& ctx, Rng& rng);

    static constexpr double kMinPollSeconds = 1.0;

private:
    bool start_query(TimePoint local_now);

    ServerSpec spec_;
    bool queried_ = false;
    TimePoint last_query_;
};

struct ChainedResponse {
    RoughtimeResponse response;
    bool link_verified = false;
};

struct ChainResult {
    std::vector<ChainedResponse> links;
    std::optional<std::size_t> broken_at; // index of the first failed link
};

// Issues one request per server where each nonce derives from the previous
// response and the GNSS timestamp, so a misbehaving middle server breaks the
// chain at its own index.
ChainResult chain_roughtime(const std::vector<ServerSpec>& servers, const NetworkState& net,
                            const QueryContext& ctx, TimePoint gnss_time, Rng& rng);

// Default two-tier catalog: coarse Roughtime (tens of ms radius, high latency)
// and NTS pool roughly three orders of magnitude better in short-term
// stability.
std::vector<ServerSpec> default_server_catalog();

} // namespace timefence::net
