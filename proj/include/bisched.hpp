#pragma once

#include "bisched/rational.hpp"
#include "bisched/errors.hpp"
#include "bisched/bipartite.hpp"
#include "bisched/core.hpp"
#include "bisched/precolor.hpp"
#include "bisched/oracle.hpp"
#include "bisched/unrelated.hpp"
#include "bisched/uniform.hpp"
#include "bisched/randgraph.hpp"
#include "bisched/gadgets.hpp"
#include "bisched/io.hpp"
