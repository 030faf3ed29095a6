#pragma once

#include "quintica/core.hpp"
#include "quintica/eos.hpp"
#include "quintica/oracle.hpp"
#include "quintica/output.hpp"
#include "quintica/series.hpp"
#include "quintica/tschirnhaus.hpp"
