#pragma once

#include "scma/codebook.hpp"
#include "scma/common.hpp"
#include "scma/design_params.hpp"
#include "scma/factor_graph.hpp"
#include "scma/io.hpp"
#include "scma/linksim.hpp"
#include "scma/metrics.hpp"
#include "scma/mpa.hpp"
#include "scma/optimizer.hpp"
#include "scma/udcg.hpp"
