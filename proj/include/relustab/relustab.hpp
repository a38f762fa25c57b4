#pragma once

#include "relustab/augment.hpp"
#include "relustab/canonical.hpp"
#include "relustab/landscape.hpp"
#include "relustab/metrics.hpp"
#include "relustab/network.hpp"
#include "relustab/pathology.hpp"
#include "relustab/regions.hpp"
#include "relustab/reparam.hpp"
#include "relustab/serialize.hpp"
#include "relustab/simplex.hpp"
#include "relustab/types.hpp"
