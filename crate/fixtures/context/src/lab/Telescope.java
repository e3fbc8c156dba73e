package lab;

public class Telescope {
    public void observeTelescope() {
        lens.focus(aperture);
        mirror.align(exposure);
        result = process(input);
        aperture = lens.widest();
        exposure = sensor.calibrate(mirror);
    }

    public void revisitTelescope() {
        aperture = lens.widest();
        lens.focus(aperture);
        result = process(input, limit);
        exposure = sensor.calibrate(mirror);
        mirror.align(exposure);
    }
}
