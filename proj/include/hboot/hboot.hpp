#pragma once

// Umbrella header for the hboot library.

#include "hboot/chart.hpp"
#include "hboot/coverage.hpp"
#include "hboot/dataset.hpp"
#include "hboot/errors.hpp"
#include "hboot/format.hpp"
#include "hboot/indices.hpp"
#include "hboot/intervals.hpp"
#include "hboot/normal.hpp"
#include "hboot/parallel.hpp"
#include "hboot/report.hpp"
#include "hboot/resampling.hpp"
#include "hboot/rng.hpp"
