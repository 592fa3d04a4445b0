#pragma once

#include "momentkit/core.hpp"
#include "momentkit/lie.hpp"
#include "momentkit/model_io.hpp"
#include "momentkit/models.hpp"
#include "momentkit/moment.hpp"
#include "momentkit/projective.hpp"
#include "momentkit/rng.hpp"
#include "momentkit/verify.hpp"
