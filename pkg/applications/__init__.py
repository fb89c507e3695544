# Applications package
