#pragma once

#include "adscreen/adsim/simulator.hpp"
#include "adscreen/service/service.hpp"

#include <chrono>

namespace adscreen::service {

// Drives simulated visits through a ScreeningService, so the simulator and
// the service agree on every funnel count. Conversions are observed through
// `ads` (a loopback client also passed to the service); the clock is moved to
// each visit's click time and forward while the visitor answers.
class ServiceFunnelBackend final : public adsim::FunnelBackend {
public:
    ServiceFunnelBackend(ScreeningService& service, const LoopbackAdClient& ads, ManualClock& clock)
        : service_(service), ads_(ads), clock_(clock) {}

    adsim::VisitOutcome visit(const adsim::Visit& v) override;
    // Moves the clock to the start of the following day and expires sessions
    // idle since the day before.
    void end_day(int day, Date date) override;

    const std::vector<std::string>& session_ids() const { return session_ids_; }

private:
    ScreeningService& service_;
    const LoopbackAdClient& ads_;
    ManualClock& clock_;
    std::vector<std::string> session_ids_;
};

} // namespace adscreen::service
