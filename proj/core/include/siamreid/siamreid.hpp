#pragma once

#include "siamreid/association.hpp"
#include "siamreid/embedding.hpp"
#include "siamreid/errors.hpp"
#include "siamreid/evaluation.hpp"
#include "siamreid/frame.hpp"
#include "siamreid/geometry.hpp"
#include "siamreid/image.hpp"
#include "siamreid/providers.hpp"
#include "siamreid/random.hpp"
#include "siamreid/simulator.hpp"
#include "siamreid/tracker.hpp"
#include "siamreid/version.hpp"
