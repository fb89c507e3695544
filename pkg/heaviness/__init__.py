# Heaviness package
