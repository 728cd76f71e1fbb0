// Every public header must compile standalone under -Wall -Wextra.

#include "anonet/anonymity.hpp"
#include "anonet/artifacts.hpp"
#include "anonet/baselines.hpp"
#include "anonet/bitstring.hpp"
#include "anonet/config_io.hpp"
#include "anonet/evolution.hpp"
#include "anonet/graph.hpp"
#include "anonet/rng.hpp"
#include "anonet/stats.hpp"
#include "anonet/tuning.hpp"
#include "anonet/utility.hpp"

#include <catch2/catch_amalgamated.hpp>

TEST_CASE("headers compile and a trivial pipeline runs") {
    // 0-1-2 triangle with pendant 3: nodes 0 and 1 share state (2,1), the rest
    // are unique.
    const anonet::Graph g = anonet::Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {0, 2}});
    const anonet::AnonymityView view(g);
    REQUIRE(view.unique_count() == 2);
    REQUIRE(g.edge_count() == 4);
}
