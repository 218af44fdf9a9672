#pragma once

#include "ppim/error.hpp"
#include "ppim/pim/bytes.hpp"
#include "ppim/pim/cost_model.hpp"
#include "ppim/pim/system.hpp"
#include "ppim/pim/tasklets.hpp"
#include "ppim/pim/timeline.hpp"
#include "ppim/compress/chunk.hpp"
#include "ppim/compress/dedup.hpp"
#include "ppim/compress/vbyte.hpp"
#include "ppim/kernels/modarith.hpp"
#include "ppim/kernels/poly.hpp"
#include "ppim/kernels/registry.hpp"
#include "ppim/kernels/vector_ops.hpp"
#include "ppim/orchestrate/config.hpp"
#include "ppim/orchestrate/pipeline.hpp"
#include "ppim/orchestrate/split.hpp"
#include "ppim/protocols/backend.hpp"
#include "ppim/protocols/bfv.hpp"
#include "ppim/protocols/rng.hpp"
#include "ppim/protocols/schemes.hpp"
#include "ppim/protocols/sharing.hpp"
#include "ppim/apps/apps.hpp"
#include "ppim/apps/bench.hpp"
#include "ppim/apps/pipeline_ops.hpp"
#include "ppim/apps/selftest.hpp"
