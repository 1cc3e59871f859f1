#pragma once

#include "mmal/balancing.hpp"
#include "mmal/encoding.hpp"
#include "mmal/error.hpp"
#include "mmal/io/alb.hpp"
#include "mmal/io/csv.hpp"
#include "mmal/io/experiment.hpp"
#include "mmal/io/mixed_model.hpp"
#include "mmal/pipeline.hpp"
#include "mmal/precedence.hpp"
#include "mmal/sequencing.hpp"
#include "mmal/stats.hpp"
#include "mmal/swarm/search.hpp"
