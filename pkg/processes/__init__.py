# Processes package
