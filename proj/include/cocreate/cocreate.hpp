#pragma once

#include "cocreate/ati.hpp"
#include "cocreate/config.hpp"
#include "cocreate/csv.hpp"
#include "cocreate/error.hpp"
#include "cocreate/fixture.hpp"
#include "cocreate/graph.hpp"
#include "cocreate/graph_builder.hpp"
#include "cocreate/mediawiki.hpp"
#include "cocreate/net_metrics.hpp"
#include "cocreate/pipeline.hpp"
#include "cocreate/regression.hpp"
#include "cocreate/reports.hpp"
#include "cocreate/revision.hpp"
#include "cocreate/snapshot_io.hpp"
#include "cocreate/special_functions.hpp"
#include "cocreate/stopwords.hpp"
#include "cocreate/time_util.hpp"
#include "cocreate/topic_model.hpp"
