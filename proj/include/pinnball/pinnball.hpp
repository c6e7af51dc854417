#pragma once

#include "pinnball/approx.hpp"
#include "pinnball/config.hpp"
#include "pinnball/dataset.hpp"
#include "pinnball/experiments.hpp"
#include "pinnball/finite_diff.hpp"
#include "pinnball/geometry.hpp"
#include "pinnball/io.hpp"
#include "pinnball/matrix.hpp"
#include "pinnball/model.hpp"
#include "pinnball/monitors.hpp"
#include "pinnball/rademacher.hpp"
#include "pinnball/rng.hpp"
#include "pinnball/stats.hpp"
#include "pinnball/svg.hpp"
#include "pinnball/target.hpp"
#include "pinnball/theory.hpp"
#include "pinnball/train.hpp"
