package shop;

public class Scheduler {
    public void tick(long now) {
        long elapsed = now - lastTick;
        lastTick = now;
        queue.advance(elapsed);
        while (queue.hasDue(now))
            runner.submit(queue.pollDue(now));
        metrics.ticks.increment();
        Job stalled = watchdog.oldestRunning();
        if (stalled != null && stalled.age(now) > stallLimit)
            stalled.interrupt();
        int waiting = queue.size();
        gauge.set(waiting);
        long nextWake = queue.nextDueTime();
        timer.schedule(this::tick, nextWake - now);
        heartbeat.beat(now);
    }

    public Duration retry(String jobId, int attempt) {
        Job job = jobs.get(jobId);
        if (job == null)
            throw new NoSuchElementException(jobId);
        long millis = baseDelay * (1L << Math.min(attempt, 10));
        millis = Math.min(millis, maxDelay);
        long jitter = random.nextInt(250);
        job.setAttempt(attempt + 1);
        queue.enqueueAt(job, clock.millis() + millis + jitter);
        listeners.forEach(l -> l.retried(jobId, attempt));
        metrics.retries.increment();
        runner.wake();
        accepting = queue.size() < capacity;
        return Duration.ofMillis(millis + jitter);
    }
}
