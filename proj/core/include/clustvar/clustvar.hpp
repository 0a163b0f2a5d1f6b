#pragma once

#include "clustvar/data_model.hpp"
#include "clustvar/errors.hpp"
#include "clustvar/hierarchy.hpp"
#include "clustvar/partition.hpp"
#include "clustvar/partitioning.hpp"
#include "clustvar/pcamix.hpp"
#include "clustvar/random.hpp"
#include "clustvar/similarity.hpp"
#include "clustvar/stability.hpp"
