#pragma once

#include "ksid/bounds.hpp"
#include "ksid/dynamics.hpp"
#include "ksid/kernels.hpp"
#include "ksid/lqr.hpp"
#include "ksid/metrics.hpp"
#include "ksid/modelsel.hpp"
#include "ksid/spectral.hpp"
#include "ksid/sysid.hpp"
#include "ksid/types.hpp"
