#pragma once

#include "hbc/errors.hpp"
#include "hbc/exhaustive.hpp"
#include "hbc/gf2.hpp"
#include "hbc/oracle.hpp"
#include "hbc/pairgraph.hpp"
#include "hbc/rational.hpp"
#include "hbc/solution.hpp"
#include "hbc/solvers.hpp"
#include "hbc/textio.hpp"
#include "hbc/transforms.hpp"
