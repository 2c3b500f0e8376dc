#pragma once

#include "csdelay/analysis/certificate.hpp"
#include "csdelay/analysis/classify.hpp"
#include "csdelay/analysis/condition.hpp"
#include "csdelay/analysis/diameters.hpp"
#include "csdelay/analysis/halanay.hpp"
#include "csdelay/analysis/monitors.hpp"
#include "csdelay/analysis/report.hpp"
#include "csdelay/core/errors.hpp"
#include "csdelay/core/frame.hpp"
#include "csdelay/core/history.hpp"
#include "csdelay/core/influence.hpp"
#include "csdelay/core/initial_history.hpp"
#include "csdelay/core/scenario.hpp"
#include "csdelay/core/scenario_io.hpp"
#include "csdelay/dynamics/integrator.hpp"
#include "csdelay/dynamics/trajectory.hpp"
#include "csdelay/dynamics/trajectory_csv.hpp"
#include "csdelay/dynamics/weights.hpp"
