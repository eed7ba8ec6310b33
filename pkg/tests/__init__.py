# Tests package for cliffpoint
