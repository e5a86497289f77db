#pragma once

#include "entsim/entailment.hpp"
#include "entsim/errors.hpp"
#include "entsim/geometry.hpp"
#include "entsim/regions.hpp"
#include "entsim/report.hpp"
#include "entsim/risk.hpp"
#include "entsim/similarity.hpp"
#include "entsim/trajectory_csv.hpp"
