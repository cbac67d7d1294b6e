#pragma once

#include "qualisem/calculus.hpp"
#include "qualisem/decision.hpp"
#include "qualisem/environment.hpp"
#include "qualisem/episode.hpp"
#include "qualisem/error.hpp"
#include "qualisem/formula.hpp"
#include "qualisem/lexer.hpp"
#include "qualisem/rng.hpp"
#include "qualisem/scenario.hpp"
#include "qualisem/world.hpp"
