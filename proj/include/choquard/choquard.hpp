#pragma once

#include "choquard/asymptotics.hpp"
#include "choquard/decay_law.hpp"
#include "choquard/errors.hpp"
#include "choquard/groundstate.hpp"
#include "choquard/interaction.hpp"
#include "choquard/radial.hpp"
#include "choquard/report.hpp"
#include "choquard/riesz.hpp"
#include "choquard/special.hpp"
#include "choquard/symmetry.hpp"
