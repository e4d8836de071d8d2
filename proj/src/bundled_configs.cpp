#include "contagion/experiment.hpp"

namespace contagion {

// One config per reproduced figure/check. fig1b is the full-size run and is
// slow; every other config finishes at desk scale.
const std::map<std::string, std::string>& bundled_configs() {
    static const std::map<std::string, std::string> configs = {
        {"fig1b-desk", R"(name = fig1b-desk
[generator]
model = ws
n = 100000
d = 100
r = 0.1
[cascade]
model = ret
m = 8000
alpha = 0.7
beta = 0.01
[snapshots]
sizes = 62,500,8000
[metrics]
degrees = both
fit = 3:80:1.1
[run]
count = 10
base_seed = 101
)"},
        {"fig1b", R"(name = fig1b
[generator]
model = ws
n = 1000000
d = 100
r = 0.1
[cascade]
model = ret
m = 80000
alpha = 0.7
beta = 0.01
[snapshots]
sizes = 625,5000,80000
[metrics]
degrees = both
fit = 3:80:1.1
[run]
count = 10
base_seed = 11
)"},
        {"fig2-desk", R"(name = fig2-desk
[generator]
model = ws
n = 100000
d = 100
r = 0.1
[cascade]
model = ret
m = 32000
alpha = 0.7
beta = 0.01
[snapshots]
sizes = 500,1000,2000,4000,8000,16000,32000
[metrics]
diameter = sampled:48
densify = true
[run]
count = 10
base_seed = 201
)"},
        {"fig3-desk", R"(name = fig3-desk
[generator]
model = ws
n = 100000
d = 100
r = 0.1
[cascade]
model = ret
m = 8333
alpha = 0.7
beta = 0.01
[snapshots]
sizes = 8333
[metrics]
ncp = both
ncp_seeds = 32
[run]
count = 1
base_seed = 301
)"},
        {"ncp-collapse-r035", R"(name = ncp-collapse-r035
[generator]
model = ws
n = 100000
d = 100
r = 0.35
[cascade]
model = ret
m = 8333
alpha = 0.7
beta = 0.01
[snapshots]
sizes = 8333
[metrics]
ncp = final
ncp_seeds = 32
[run]
count = 1
base_seed = 351
)"},
        {"theorem-pcm", R"(name = theorem-pcm
[generator]
model = pcm
n = 250000
k = 500
r = 0.2
[cascade]
model = retig
m = 2500
[snapshots]
sizes = 2500
[metrics]
degrees = snapshots
fit = 10:250:1.2
occupancy = true
[run]
count = 50
base_seed = 401
)"},
        {"er-negative", R"(name = er-negative
[generator]
model = er
n = 100000
d = 10
[cascade]
model = ret
m = 10000
alpha = 0.7
beta = 0.01
[snapshots]
sizes = 500,1000,2000,4000,8000,10000
[metrics]
degrees = snapshots
fit = 3:80:1.1
ncp = size:8000
densify = true
[run]
count = 10
base_seed = 501
)"},
        {"pa-negative", R"(name = pa-negative
[generator]
model = pa
n = 100000
d = 10
[cascade]
model = ret
m = 10000
alpha = 0.7
beta = 0.01
[snapshots]
sizes = 500,1000,2000,4000,8000,10000
[metrics]
degrees = snapshots
fit = 3:80:1.1
ncp = size:8000
densify = true
[run]
count = 10
base_seed = 601
)"},
    };
    return configs;
}

}  // namespace contagion
