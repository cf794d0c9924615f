#pragma once

#include "neuromap/clustering.hpp"
#include "neuromap/energy.hpp"
#include "neuromap/hardware_config.hpp"
#include "neuromap/mapper.hpp"
#include "neuromap/model.hpp"
#include "neuromap/noc_sim.hpp"
#include "neuromap/pipeline.hpp"
#include "neuromap/placement.hpp"
#include "neuromap/report.hpp"
#include "neuromap/rng.hpp"
#include "neuromap/workload.hpp"
