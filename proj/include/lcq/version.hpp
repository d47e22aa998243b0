#pragma once

#define LCQ_VERSION_MAJOR 0
#define LCQ_VERSION_MINOR 1
#define LCQ_VERSION_PATCH 0
#define LCQ_VERSION_STRING "0.1.0"
