#pragma once

#include "bihat/common.hpp"
#include "bihat/frac_ops.hpp"
#include "bihat/grid.hpp"
#include "bihat/harness.hpp"
#include "bihat/lp_paraproducts.hpp"
#include "bihat/semigroup.hpp"
#include "bihat/symbols.hpp"
#include "bihat/testbed.hpp"
#include "bihat/weights_norms.hpp"
