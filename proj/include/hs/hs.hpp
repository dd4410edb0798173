#pragma once

#include "hs/errors.hpp"
#include "hs/random.hpp"
#include "hs/ledger.hpp"
#include "hs/instances.hpp"
#include "hs/search_matrix.hpp"
#include "hs/subset_family.hpp"
#include "hs/coin_weighing.hpp"
#include "hs/graph_finding.hpp"
#include "hs/serialize.hpp"
#include "hs/harness.hpp"
