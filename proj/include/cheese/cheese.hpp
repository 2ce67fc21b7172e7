#pragma once

#include "cheese/bounds.hpp"
#include "cheese/certificates.hpp"
#include "cheese/error.hpp"
#include "cheese/geometry.hpp"
#include "cheese/io.hpp"
#include "cheese/jensen.hpp"
#include "cheese/mckissick.hpp"
#include "cheese/rational.hpp"
#include "cheese/rational_function.hpp"
#include "cheese/report.hpp"
#include "cheese/schedule.hpp"
#include "cheese/simplex.hpp"
