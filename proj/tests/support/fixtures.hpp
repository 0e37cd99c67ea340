#pragma once

#include "tnepfacts/grid.hpp"

namespace tnepfacts::testsupport {

struct Fixture {
    Network net;
    std::vector<Scenario> scenarios;
    CostConfig costs;
};

// Two buses, one 100 MW line (X = 0.1 pu), a 200 MW generator at bus 0
// ($10/MWh) and 150 MW of load at bus 1. One 50 MW upgrade available for
// $100, imbalance penalty $1000/MWh. Upgrading and serving everything costs
// 100 + 150*10 = 1600; not upgrading costs 100*10 + 50*1000 = 51000. The
// planning optimum is therefore 1600 with one upgrade.
Fixture two_bus();

// Same two buses but with the angle difference capped at 0.05 rad, so at
// most 50 MW can flow regardless of upgrades (B = 1000 MW/rad). The optimum
// keeps gamma = 0 and sheds 100 MW: 10*50 + 1000*100 = 100500, with the
// angle limit active.
Fixture two_bus_angle_limited();

// Triangle with equal reactances: 300 MW of cheap generation at bus 0,
// 200 MW of load at bus 2. The direct line 0-2 carries 2/3 of any transfer
// and congests at 100 MW, capping the transfer at 150 MW. Upgrades add only
// 20 MW per line, raising the cap to 180 MW; a series device on the direct
// line can raise its reactance to 2x, balancing the split at 100/100 and
// serving all 200 MW. Device cost 220000 beats shedding (50000/MWh), so the
// device plan is strictly better than the best upgrades-only plan, which
// still sheds 20 MW. At the device optimum the flow-change envelope
// dpf = db_min * theta is active.
Fixture triangle_congested();

// Triangle variant for relaxation-strength comparisons: a fourth pendant bus
// with a 1000 MW line inflates the global big-M to 1020 while the per-branch
// values stay at 120, and the device range is sized within the branch
// rating. Used to demonstrate the strict LP-bound ordering.
Fixture triangle_loose_m();

}  // namespace tnepfacts::testsupport
