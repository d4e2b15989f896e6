#pragma once

#include "decayenv/classical.hpp"
#include "decayenv/envelope.hpp"
#include "decayenv/errors.hpp"
#include "decayenv/fourier.hpp"
#include "decayenv/frames.hpp"
#include "decayenv/signal.hpp"
#include "decayenv/spaces.hpp"
