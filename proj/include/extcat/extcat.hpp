#pragma once

#include "extcat/core.hpp"
#include "extcat/derived/backend.hpp"
#include "extcat/derived/quiver_rep.hpp"
#include "extcat/derived/windows.hpp"
#include "extcat/error.hpp"
#include "extcat/fixtures.hpp"
#include "extcat/grothendieck.hpp"
#include "extcat/model.hpp"
#include "extcat/opposite.hpp"
#include "extcat/report.hpp"
#include "extcat/search.hpp"
#include "extcat/strat.hpp"
#include "extcat/table/backend.hpp"
#include "extcat/table/interchange.hpp"
