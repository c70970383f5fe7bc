#pragma once

#include "inhand/controller.hpp"
#include "inhand/geometry.hpp"
#include "inhand/goal_manifold.hpp"
#include "inhand/interfaces.hpp"
#include "inhand/object_model.hpp"
#include "inhand/plan.hpp"
#include "inhand/planners.hpp"
#include "inhand/plant.hpp"
#include "inhand/scenario.hpp"
#include "inhand/step_schedule.hpp"
